#include "umsli/kalman.hpp"

#include <Eigen/Dense>

namespace umsli {

namespace {

using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

Mat4 cov_of(const TrackState& t) {
    Mat4 p;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) p(i, j) = t.cov[static_cast<std::size_t>(4 * i + j)];
    return p;
}

void store(TrackState& t, const Vec4& x, const Mat4& p) {
    const Mat4 sym = 0.5 * (p + p.transpose());
    for (int i = 0; i < 4; ++i) t.state[static_cast<std::size_t>(i)] = x(i);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) t.cov[static_cast<std::size_t>(4 * i + j)] = sym(i, j);
}

}  // namespace

TrackState init_track(const Box& box, int frame, const KalmanParams& params) {
    if (box.w <= 0 || box.h <= 0) throw InvalidParam("track needs a box with positive area");
    TrackState t;
    t.frame = frame;
    Vec4 x(box.cx(), box.cy(), 0.0, 0.0);
    Mat4 p = Mat4::Zero();
    p(0, 0) = p(1, 1) = params.initial_pos_var;
    p(2, 2) = p(3, 3) = params.initial_vel_var;
    store(t, x, p);
    return t;
}

TrackState predict(const TrackState& track, int delta_frames, const KalmanParams& params) {
    if (delta_frames < 0) throw InvalidParam("cannot predict backwards");
    TrackState out = track;
    out.frame = track.frame + delta_frames;
    if (delta_frames == 0) return out;
    Mat4 f = Mat4::Identity();
    f(0, 2) = f(1, 3) = static_cast<double>(delta_frames);
    const Vec4 x = f * Eigen::Map<const Vec4>(track.state.data());
    const Mat4 q = params.process_noise * delta_frames * Mat4::Identity();
    const Mat4 p = f * cov_of(track) * f.transpose() + q;
    store(out, x, p);
    return out;
}

TrackState update(const TrackState& track, double meas_x, double meas_y,
                  const KalmanParams& params) {
    Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
    h(0, 0) = h(1, 1) = 1.0;
    const Eigen::Matrix2d r = params.measurement_noise * Eigen::Matrix2d::Identity();
    const Vec4 x = Eigen::Map<const Vec4>(track.state.data());
    const Mat4 p = cov_of(track);

    const Eigen::Vector2d innovation(meas_x - x(0), meas_y - x(1));
    const Eigen::Matrix2d s = h * p * h.transpose() + r;
    const Eigen::Matrix<double, 4, 2> k = p * h.transpose() * s.inverse();
    const Vec4 x_post = x + k * innovation;
    // Joseph form keeps the posterior covariance PSD
    const Mat4 ikh = Mat4::Identity() - k * h;
    const Mat4 p_post = ikh * p * ikh.transpose() + k * r * k.transpose();

    TrackState out = track;
    store(out, x_post, p_post);
    return out;
}

}  // namespace umsli
