#ifndef COGS_ERRORS_HPP
#define COGS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cogs {

/// Base class for all domain errors raised by the engine.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define COGS_DEFINE_ERROR(Name)                                    \
    struct Name : Error {                                          \
        explicit Name(const std::string& what) : Error(what) {}    \
    }

// Input / schema validation
COGS_DEFINE_ERROR(SchemaError);
COGS_DEFINE_ERROR(OrderingError);
COGS_DEFINE_ERROR(NonMonotonicTime);

// Gesture segmentation / extraction
COGS_DEFINE_ERROR(EmptySegment);
COGS_DEFINE_ERROR(NoHands);
COGS_DEFINE_ERROR(DegenerateRay);
COGS_DEFINE_ERROR(NoIntersection);
COGS_DEFINE_ERROR(NoSurfaceHit);
COGS_DEFINE_ERROR(ZeroLengthLine);

// Numerical fitting
COGS_DEFINE_ERROR(DegenerateInput);
COGS_DEFINE_ERROR(NoConvergence);
COGS_DEFINE_ERROR(EmptyPath);

// Function execution
COGS_DEFINE_ERROR(UnknownFunction);
COGS_DEFINE_ERROR(UnknownObject);
COGS_DEFINE_ERROR(NotManipulatable);
COGS_DEFINE_ERROR(UnknownColor);

// Intent planning
COGS_DEFINE_ERROR(NoFunctionMatched);
COGS_DEFINE_ERROR(EmptyTranscript);
COGS_DEFINE_ERROR(MalformedReply);
COGS_DEFINE_ERROR(BackendTimeout);
COGS_DEFINE_ERROR(BackendUnreachable);

// Evaluation harness
COGS_DEFINE_ERROR(MissingGroundTruth);

#undef COGS_DEFINE_ERROR

}  // namespace cogs

#endif
