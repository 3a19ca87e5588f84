#ifndef ROUTERKIT_SCANIO_FORMATS_HPP
#define ROUTERKIT_SCANIO_FORMATS_HPP

#include <iosfwd>
#include <vector>

#include "routerkit/coupling.hpp"
#include "routerkit/fitkit/models.hpp"
#include "routerkit/merit.hpp"
#include "routerkit/scanio/scan.hpp"
#include "routerkit/scattering.hpp"

namespace routerkit::scanio
{

// freq_ghz[,bus][,drop]; metadata as "# integration_s=...", gap_nm, temperature_k, power_uw.
RawScan read_raw_scan(std::istream& in);
void write_raw_scan(std::ostream& out, const RawScan& scan);

// center_ghz,kappa_ghz,q,delta_t,order
ResonanceTable read_resonance_table(std::istream& in);
void write_resonance_table(std::ostream& out, const ResonanceTable& table);

// gap_nm,delta_t,delta_t_err,q,q_err; error columns may be omitted.
GapSeries read_gap_series(std::istream& in);
void write_gap_series(std::ostream& out, const GapSeries& series);

// r_um,z_um,Er_re,Er_im,Ez_re,Ez_im,Ephi_re,Ephi_im,Hr_re,Hr_im,Hz_re,Hz_im,Hphi_re,Hphi_im,eps_rel,mu_rel
// row-major over the grid (z fastest). mu_rel may be omitted (taken as 1).
FieldGrid read_field_grid(std::istream& in);
void write_field_grid(std::ostream& out, const FieldGrid& grid);

// x_ghz,t_drop,t_bus
PortSpectra read_spectrum(std::istream& in);
void write_spectrum(std::ostream& out, const PortSpectra& spectra);

// t_ns,counts[,sigma]
fitkit::DataSeries read_lifetime(std::istream& in);
void write_lifetime(std::ostream& out, const fitkit::DataSeries& decay);

// series,port,x_ghz,y[,sigma] with port "drop" or "bus"; series numbered from 0.
std::vector<fitkit::PowerSeries> read_multipower(std::istream& in);
void write_multipower(std::ostream& out, const std::vector<fitkit::PowerSeries>& series);

} // namespace routerkit::scanio

#endif
