#pragma once

#include <stdexcept>
#include <string>

namespace plasmonqd {

// maps onto the CLI exit codes (1, 2, 3)
enum class ErrorClass { config = 1, contract = 2, numerical = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorClass kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorClass kind() const noexcept { return kind_; }

private:
    ErrorClass kind_;
};

#define PLASMONQD_ERROR(Name, Kind)                                                        \
    struct Name : Error {                                                                  \
        explicit Name(const std::string& what) : Error(ErrorClass::Kind, #Name ": " + what) {} \
    }

PLASMONQD_ERROR(InvalidParams, config);
PLASMONQD_ERROR(TangentPole, config);
PLASMONQD_ERROR(GridTooCoarse, config);
PLASMONQD_ERROR(StepTooLarge, config);
PLASMONQD_ERROR(BandwidthTooWide, config);

PLASMONQD_ERROR(ContractViolation, contract);

PLASMONQD_ERROR(SingularSystem, numerical);
PLASMONQD_ERROR(NoPeakInBracket, numerical);
PLASMONQD_ERROR(NoMinimumInBracket, numerical);
PLASMONQD_ERROR(EmptyProjection, numerical);
PLASMONQD_ERROR(NotConverged, numerical);
PLASMONQD_ERROR(PopulationUnderflow, numerical);

#undef PLASMONQD_ERROR

}  // namespace plasmonqd
