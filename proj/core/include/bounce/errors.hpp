#pragma once

#include <stdexcept>
#include <string>

namespace bounce {

/// Base class for every error raised by the library. The CLI maps any
/// bounce::Error to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define BOUNCE_DEFINE_ERROR(Name)          \
    class Name : public Error {            \
    public:                                \
        using Error::Error;                \
    }

// simulation
BOUNCE_DEFINE_ERROR(InvalidSeedRange);
BOUNCE_DEFINE_ERROR(MissingVariableRange);

// data store
BOUNCE_DEFINE_ERROR(SchemaError);
BOUNCE_DEFINE_ERROR(OrderError);
BOUNCE_DEFINE_ERROR(ValueError);
BOUNCE_DEFINE_ERROR(GapError);
BOUNCE_DEFINE_ERROR(IoError);

// scoring
BOUNCE_DEFINE_ERROR(EmptySeries);
BOUNCE_DEFINE_ERROR(InsufficientHistory);
BOUNCE_DEFINE_ERROR(DegenerateCrossSection);
BOUNCE_DEFINE_ERROR(InvalidWeights);

// screening
BOUNCE_DEFINE_ERROR(EmptyAfterFilters);
BOUNCE_DEFINE_ERROR(InsufficientSnapshots);

// portfolio
BOUNCE_DEFINE_ERROR(InfeasibleCap);
BOUNCE_DEFINE_ERROR(NonPositiveScore);

// path diagnostics
BOUNCE_DEFINE_ERROR(PathTooShort);
BOUNCE_DEFINE_ERROR(GenerationFailure);

// configuration
BOUNCE_DEFINE_ERROR(ConfigError);

#undef BOUNCE_DEFINE_ERROR

}  // namespace bounce
