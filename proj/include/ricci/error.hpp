#pragma once

#include <stdexcept>
#include <string>

namespace ricci {

enum class ErrorKind {
    InvalidArgument,
    CutLocus,
    InsufficientNeighborhood,
    IllConditionedTangent,
    SingularFit,
    EmptyBall,
    ZeroDistance,
    Disconnected,
    DisconnectedCost,
    MassMismatch,
    SizeMismatch,
    InstanceTooLarge,
    NonMonotoneGrid,
    Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail);
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace ricci
