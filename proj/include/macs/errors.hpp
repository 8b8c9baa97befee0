#pragma once

#include <stdexcept>
#include <string>

namespace macs {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// semantics
struct EmptyTaskError : Error { using Error::Error; };
struct DegenerateSumError : Error { using Error::Error; };

// decompose
struct DegenerateQueryError : Error { using Error::Error; };
struct DegenerateSubtaskError : Error { using Error::Error; };

// schedule
struct NoAgentsError : Error { using Error::Error; };

// aggregate
struct DegenerateFusionError : Error { using Error::Error; };

// metrics
struct EmptyBatchError : Error { using Error::Error; };
struct ZeroWorkError : Error { using Error::Error; };

// worldgen
struct SpecError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };

// harness
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace macs
