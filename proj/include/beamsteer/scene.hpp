#pragma once

#include <memory>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "beamsteer/geometry.hpp"

// World model: parametric surfaces, ray intersection producing the laser
// spot, mirror kinematics and stereo observation of the spot.

namespace beamsteer::scene {

using geom::BeamDirection;
using geom::CameraModel;
using geom::HomogPixel;
using geom::Vec2;
using geom::Vec3;

struct Plane {
    Vec3 point;
    Vec3 normal;  // need not be unit
};

struct Sphere {
    Vec3 center;
    double radius = 1.0;
};

// Rectangular grid of z over (x, y), bilinear between nodes.
struct Heightfield {
    std::vector<double> xs;  // ascending
    std::vector<double> ys;  // ascending
    std::vector<double> z;   // z[j * xs.size() + i] at (xs[i], ys[j])

    double sample(double x, double y) const;
    bool inside(double x, double y) const;
};

struct Surface;

// Base geometry scaled about `anchor` by amplitude^sin(2*pi*t/period),
// so the scale factor stays within [1/amplitude, amplitude].
struct TimeVarying {
    std::shared_ptr<const Surface> base;
    double amplitude = 1.0;  // >= 1
    double period = 1.0;     // s
    Vec3 anchor;

    double scale_at(double time) const;
};

struct Surface {
    std::variant<Plane, Sphere, Heightfield, TimeVarying> shape;
};

Heightfield load_heightfield_csv(const std::string& path);

// Nearest intersection with positive ray parameter, at scene time `time`.
Vec3 intersect(const Surface& s, const Vec3& origin, const BeamDirection& dir, double time);

// Signed residual of a point against the surface equation at `time`
// (zero iff the point lies on the surface).
double surface_residual(const Surface& s, const Vec3& p, double time);

struct MirrorState {
    Vec3 pivot;
    BeamDirection z0{0, 0, 1};
};

// Explicit Euler step of z0' = omega x z0, renormalized.
MirrorState mirror_step(const MirrorState& state, const Vec3& omega, double dt);

// Differential map from beam angular velocity to the two joint rates.
struct MirrorModel {
    // rows of D_inv
    Vec3 row0;
    Vec3 row1;
    double joint_limit = 0.6;  // rad, symmetric

    // Rows span the plane orthogonal to the nominal beam direction: rotation
    // about the beam itself is quotiented out.
    static MirrorModel default_for(const BeamDirection& nominal_z0, double joint_limit = 0.6);
};

struct JointRates {
    double q1 = 0.0;
    double q2 = 0.0;
};

JointRates joint_rates(const MirrorModel& model, const Vec3& omega);

struct SpotObservation {
    Vec3 world;
    HomogPixel p_l;
    HomogPixel p_r;
    double noise_sigma = 0.0;
};

// Intersect the beam with the scene and project into both cameras, adding
// independent per-axis Gaussian pixel noise. Deterministic under a fixed rng.
SpotObservation observe_spot(const Surface& s, double time, const MirrorState& mirror,
                             const CameraModel& cam_l, const CameraModel& cam_r,
                             double noise_sigma, std::mt19937_64& rng);

}  // namespace beamsteer::scene
