#pragma once

#include <stdexcept>
#include <string>

namespace vdm {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// I/O and file-format errors
struct IoError : Error { using Error::Error; };
struct ChannelError : Error { using Error::Error; };
struct FormatError : Error { using Error::Error; };
struct CorruptFileError : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };
struct DuplicateError : Error { using Error::Error; };
struct JoinError : Error { using Error::Error; };

// Input-contract errors
struct EmptyInputError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct BoundsError : Error { using Error::Error; };
struct TooShortError : Error { using Error::Error; };
struct DimensionError : Error { using Error::Error; };
struct EmptyAggregateError : Error { using Error::Error; };

// Numerical / statistical degeneracy
struct DecompositionError : Error { using Error::Error; };
struct DegenerateSignalError : Error { using Error::Error; };
struct ConstantInputError : Error { using Error::Error; };
struct SingleClassError : Error { using Error::Error; };
struct GeneratorError : Error { using Error::Error; };

} // namespace vdm
