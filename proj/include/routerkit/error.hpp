#ifndef ROUTERKIT_ERROR_HPP
#define ROUTERKIT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace routerkit
{

enum class ErrorCode
{
    Domain,           // argument outside the mathematical domain
    SingularParameter,// f-factor denominator vanishes without the lossless flag
    InvalidInput,     // malformed data, files, or violated preconditions
    AxisTooCoarse,    // grid cannot resolve the Gaussian kernel
    Evaluation,       // model produced a non-finite value
    Detection,        // no feature to fit
    Rank,             // under-determined fit
    Convergence,      // optimizer did not converge
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Non-fatal diagnostics collected by operations that degrade gracefully.
using Warnings = std::vector<std::string>;

inline void warn(Warnings* sink, std::string message)
{
    if (sink != nullptr)
    {
        sink->push_back(std::move(message));
    }
}

} // namespace routerkit

#endif
