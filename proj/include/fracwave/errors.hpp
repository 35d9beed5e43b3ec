#pragma once

#include <stdexcept>
#include <string>

namespace fracwave {

/// Base of every error thrown by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define FRACWAVE_DEFINE_ERROR(Name, tag)                                  \
    class Name : public Error {                                           \
    public:                                                               \
        explicit Name(const std::string& what) : Error(tag, what) {}      \
    }

FRACWAVE_DEFINE_ERROR(InvalidArgumentError, "invalid_argument");
FRACWAVE_DEFINE_ERROR(NonConvergenceError, "non_convergence");
FRACWAVE_DEFINE_ERROR(RegimeDisagreementError, "regime_disagreement");
FRACWAVE_DEFINE_ERROR(UncertifiedBoundError, "uncertified_bound");
FRACWAVE_DEFINE_ERROR(DivergenceError, "divergence");
FRACWAVE_DEFINE_ERROR(ZeroNormError, "zero_norm");
FRACWAVE_DEFINE_ERROR(IllPosedSystemError, "ill_posed_system");
FRACWAVE_DEFINE_ERROR(RankDeficiencyError, "rank_deficiency");
FRACWAVE_DEFINE_ERROR(IoError, "io_error");

#undef FRACWAVE_DEFINE_ERROR

}  // namespace fracwave
