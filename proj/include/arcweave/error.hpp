#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace arcweave {

enum class ErrorCode {
    InvalidArgument = 1,
    CenterMismatch,
    OrderMismatch,
    DivisionBySingular,
    BranchAtSingularity,
    SeedInconsistent,
    InnerNotCentered,
    NotLocallyInvertible,
    StepExceedsRadius,
    NonRealCenter,
    ParseError,
    SingularAtCenter,
    BranchJumpDetected,
    UnknownBuiltin,
    ZeroDerivative,
    ObstructionDetected,
    DriftUnrecoverable,
    QuadratureNonconvergent,
    TooFewSamples,
    DegenerateConfiguration,
    MalformedTrace,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised by the curve DSL parser; `position` is the 0-based character offset.
class ParseError : public Error {
public:
    ParseError(std::size_t position, const std::string& message)
        : Error(ErrorCode::ParseError,
                "at position " + std::to_string(position) + ": " + message),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Raised when a subexpression is singular (pole, zero radicand) at the jet center.
class SingularAtCenter : public Error {
public:
    SingularAtCenter(int node_id, const std::string& message)
        : Error(ErrorCode::SingularAtCenter,
                "node " + std::to_string(node_id) + ": " + message),
          node_id_(node_id) {}

    int node_id() const noexcept { return node_id_; }

private:
    int node_id_;
};

}  // namespace arcweave
