#ifndef UMSLI_KALMAN_HPP
#define UMSLI_KALMAN_HPP

#include <array>

#include "umsli/core.hpp"

namespace umsli {

struct KalmanParams {
    double process_noise = 0.1;      // Q diagonal, px^2 per frame
    double measurement_noise = 1.0;  // R diagonal, px^2
    double initial_pos_var = 4.0;
    /// Near-uninformative velocity prior: the first correction after init
    /// then recovers the inter-frame displacement almost exactly.
    double initial_vel_var = 1e4;
};

/// Constant-velocity track: state (cx, cy, vx, vy) with a 4x4 covariance.
struct TrackState {
    std::array<double, 4> state{};       // cx, cy, vx, vy
    std::array<double, 16> cov{};        // row-major 4x4, symmetric PSD
    int frame = 0;

    double cx() const { return state[0]; }
    double cy() const { return state[1]; }
    double vx() const { return state[2]; }
    double vy() const { return state[3]; }
};

/// Starts a track at the box centroid with zero velocity.
TrackState init_track(const Box& box, int frame, const KalmanParams& params = {});

/// Constant-velocity propagation over delta_frames; process noise grows
/// linearly with the step.
TrackState predict(const TrackState& track, int delta_frames, const KalmanParams& params = {});

/// Standard gain-weighted correction against a measured centroid.
TrackState update(const TrackState& track, double meas_x, double meas_y,
                  const KalmanParams& params = {});

}  // namespace umsli

#endif
