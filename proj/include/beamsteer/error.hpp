#pragma once

#include <stdexcept>
#include <string>

namespace beamsteer {

enum class Errc {
    zero_baseline,
    rank_deficient,
    behind_camera,
    degenerate,
    no_hit,
    joint_limit,
    zero_vector,
    baseline_singularity,
    zero_velocity,
    too_few_points,
    duplicate_points,
    empty_window,
    singular_tube,
    out_of_domain,
    insufficient_data,
    parse_error,
    validation_error,
    io_error,
};

// Stable tag used in trace status columns and C API error reporting.
const char* errc_name(Errc c);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

  private:
    Errc code_;
};

}  // namespace beamsteer
