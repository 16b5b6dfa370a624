#pragma once

#include <optional>

#include "beamsteer/geometry.hpp"
#include "beamsteer/scene.hpp"

// Vectorized trifocal constraint and the point-to-point laser servo law.
//
// The actuated mirror is treated as a one-pixel virtual camera whose "pixel"
// is the beam direction z0. With h_i = F_0i * p_i the normals of the two
// epipolar planes, the constraint reads  z0 x (h_R x h_L) = 0, and the servo
// law inverts its time derivative exactly (no interaction-matrix inversion).

namespace beamsteer::trifocal {

using geom::BeamDirection;
using geom::Epipole;
using geom::FundamentalMatrix;
using geom::HomogPixel;
using geom::Vec2;
using geom::Vec3;

// Normal to an epipolar plane, expressed in the mirror (virtual-view) frame.
struct EpipolarNormal {
    Vec3 h;
};

struct TrifocalRig {
    FundamentalMatrix f0l;  // left pixels  -> mirror-frame normals
    FundamentalMatrix f0r;  // right pixels -> mirror-frame normals
    FundamentalMatrix flr;  // right pixels -> left epipolar lines
    Epipole e0l;            // virtual-view epipole of the left camera (F_0L^T e = 0)
    Epipole e0r;            // virtual-view epipole of the right camera
};

// Rig of two posed cameras plus mirror pivot, in the mirror frame.
TrifocalRig make_rig(const geom::CameraModel& cam_l, const geom::CameraModel& cam_r,
                     const Vec3& mirror_pivot);

struct ServoGains {
    double lambda = 0.5;     // 1/s, > 0
    double te = 0.05;        // s, > 0
    double sing_eps = 1e-8;  // relative cross-norm threshold
};

// h = F * p. With (e0, z0) supplied the sign is fixed so that
// h^T (e0 x z0) > 0; raw otherwise. ZeroVector when p is the epipole of F.
EpipolarNormal h_of(const FundamentalMatrix& f, const HomogPixel& p);
EpipolarNormal h_of(const FundamentalMatrix& f, const HomogPixel& p, const HomogPixel& e0,
                    const BeamDirection& z0);

// z0 = +-(h_R x h_L)/||h_R x h_L||, the sign chosen by temporal coherence
// (positive dot with the previous estimate). BaselineSingularity when the
// cross norm falls under sing_eps * ||h_R|| * ||h_L||.
BeamDirection beam_from_normals(const EpipolarNormal& h_l, const EpipolarNormal& h_r,
                                const BeamDirection& previous, double sing_eps = 1e-8);

// z0 x (h_R x h_L); zero iff the triplet is consistent (outside singularity).
Vec3 trifocal_residual(const BeamDirection& z0, const EpipolarNormal& h_l,
                       const EpipolarNormal& h_r);

// First-order error dynamics -lambda (p - p*) + p*_dot, affine parts only
// (returned with zero homogeneous component).
Vec3 desired_pixel_velocity(const HomogPixel& p, const HomogPixel& p_star, const Vec2& p_star_dot,
                            double lambda);

// Final control law:
//   Omega = -lambda eta x (h_L x h*_R - h_R x h*_L) - eta x (h_L x h*_R_dot - h_R x h*_L_dot)
// with eta = (h_R x h_L)/||h_R x h_L||^2. Omega is orthogonal to z0 by
// construction (rotation about the beam axis carries no information).
Vec3 control_omega(const EpipolarNormal& h_l, const EpipolarNormal& h_r,
                   const EpipolarNormal& h_l_star, const EpipolarNormal& h_r_star,
                   const Vec3& h_l_star_dot, const Vec3& h_r_star_dot, double lambda,
                   double sing_eps = 1e-8);

struct TargetPixels {
    HomogPixel p_l;
    HomogPixel p_r;
    // previous desired pixels; enables the finite-difference feed-forward term
    std::optional<HomogPixel> prev_l;
    std::optional<HomogPixel> prev_r;
};

// One servo iteration: observation + desired pixels -> mirror angular velocity.
Vec3 servo_step(const TrifocalRig& rig, const scene::SpotObservation& obs,
                const TargetPixels& target, const ServoGains& gains);

// Detects baseline-plane crossings between consecutive iterations: the raw
// h_R x h_L direction reverses exactly when the oriented distance
// z0^T (e_L x e_R) changes sign.
class BaselineMonitor {
  public:
    // Returns true when the current direction flipped against the previous one.
    bool crossed(const EpipolarNormal& h_l, const EpipolarNormal& h_r);

  private:
    std::optional<Vec3> prev_;
};

}  // namespace beamsteer::trifocal
