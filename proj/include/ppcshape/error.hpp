#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ppcshape {

enum class ErrorCode {
    invalid_argument,
    tolerance_not_reached,
    ill_conditioned,
    not_normalized,
    singular_orientation,
    configuration,
    no_overlap,
    misaligned_traces,
    io,
};

/// Stable machine-readable name, used in CLI error records.
std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace ppcshape
