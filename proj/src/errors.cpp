#include "lfss/errors.hpp"

namespace lfss {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::ParameterDomain: return "parameter-domain error";
        case ErrorKind::InsufficientData: return "insufficient-data error";
        case ErrorKind::UnsupportedOrder: return "unsupported-order error";
        case ErrorKind::Regime: return "regime error";
        case ErrorKind::Window: return "window error";
        case ErrorKind::Configuration: return "configuration error";
        case ErrorKind::Tolerance: return "tolerance error";
        case ErrorKind::Precondition: return "precondition violation";
        case ErrorKind::Input: return "input error";
        case ErrorKind::Ordering: return "ordering error";
        case ErrorKind::Resolution: return "resolution error";
        case ErrorKind::Tail: return "tail error";
        case ErrorKind::TruncationDomain: return "truncation-domain error";
        case ErrorKind::Io: return "io error";
    }
    return "error";
}

}  // namespace lfss
