#include "beamsteer/error.hpp"

namespace beamsteer {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::zero_baseline: return "ZeroBaseline";
        case Errc::rank_deficient: return "RankDeficient";
        case Errc::behind_camera: return "BehindCamera";
        case Errc::degenerate: return "Degenerate";
        case Errc::no_hit: return "NoHit";
        case Errc::joint_limit: return "JointLimit";
        case Errc::zero_vector: return "ZeroVector";
        case Errc::baseline_singularity: return "BaselineSingularity";
        case Errc::zero_velocity: return "ZeroVelocity";
        case Errc::too_few_points: return "TooFewPoints";
        case Errc::duplicate_points: return "DuplicatePoints";
        case Errc::empty_window: return "EmptyWindow";
        case Errc::singular_tube: return "SingularTube";
        case Errc::out_of_domain: return "OutOfDomain";
        case Errc::insufficient_data: return "InsufficientData";
        case Errc::parse_error: return "ParseError";
        case Errc::validation_error: return "ValidationError";
        case Errc::io_error: return "IoError";
    }
    return "UnknownError";
}

}  // namespace beamsteer
