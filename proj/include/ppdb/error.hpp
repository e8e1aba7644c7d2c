#pragma once

#include <stdexcept>
#include <string>

namespace ppdb {

enum class ErrorCode {
    DuplicateAttributeInType,
    UnknownAttribute,
    UnknownRelation,
    NameClash,
    EmptyCategorical,
    BadRange,
    BadAttributePosition,
    DomainMismatch,
    SchemaMismatch,
    TypeMismatch,
    MultiplicityOverflow,
    EmptyBagUndefined,
    UnsafeRule,
    PartitionOverlap,
    ZeroProbabilityCondition,
    ParseError,
    InvalidPdb,
    IoError,
};

const char* error_code_name(ErrorCode c);

/// Single exception type for all engine errors; `code()` identifies the
/// category for tests and for CLI exit-code mapping.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + msg), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace ppdb
