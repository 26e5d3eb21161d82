#include "ppcshape/error.hpp"

namespace ppcshape {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_argument: return "invalid_argument";
        case ErrorCode::tolerance_not_reached: return "tolerance_not_reached";
        case ErrorCode::ill_conditioned: return "ill_conditioned";
        case ErrorCode::not_normalized: return "not_normalized";
        case ErrorCode::singular_orientation: return "singular_orientation";
        case ErrorCode::configuration: return "configuration";
        case ErrorCode::no_overlap: return "no_overlap";
        case ErrorCode::misaligned_traces: return "misaligned_traces";
        case ErrorCode::io: return "io";
    }
    return "unknown";
}

}  // namespace ppcshape
