#include "ricci/error.hpp"

namespace ricci {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid argument";
        case ErrorKind::CutLocus: return "cut locus";
        case ErrorKind::InsufficientNeighborhood: return "insufficient neighborhood";
        case ErrorKind::IllConditionedTangent: return "ill-conditioned tangent";
        case ErrorKind::SingularFit: return "singular fit";
        case ErrorKind::EmptyBall: return "empty ball";
        case ErrorKind::ZeroDistance: return "zero distance";
        case ErrorKind::Disconnected: return "disconnected";
        case ErrorKind::DisconnectedCost: return "disconnected cost";
        case ErrorKind::MassMismatch: return "mass mismatch";
        case ErrorKind::SizeMismatch: return "size mismatch";
        case ErrorKind::InstanceTooLarge: return "instance too large";
        case ErrorKind::NonMonotoneGrid: return "non-monotone grid";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + (detail.empty() ? "" : ": " + detail)),
      kind_(kind) {}

}  // namespace ricci
