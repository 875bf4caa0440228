#include "caarl/armodel.hpp"

#include "caarl/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace caarl {

namespace {

void check_finite(const ARModel& model) {
    for (double c : model.coefficients)
        if (!std::isfinite(c)) throw Error(ErrorCode::SingularDesign, "fit produced a non-finite coefficient");
    if (!std::isfinite(model.noise_variance))
        throw Error(ErrorCode::SingularDesign, "fit produced a non-finite noise variance");
}

double one_step_prediction(std::span<const double> coefficients, std::span<const double> values, std::size_t t) {
    double pred = 0.0;
    for (std::size_t l = 1; l <= coefficients.size(); ++l) pred += coefficients[l - 1] * values[t - l];
    return pred;
}

}  // namespace

ARModel fit_ar(std::span<const double> values, std::size_t lag) {
    if (lag == 0) throw Error(ErrorCode::InvalidArgument, "lag must be positive");
    if (values.size() < 2 * lag + 1) {
        std::ostringstream msg;
        msg << values.size() << " values cannot determine an AR(" << lag << ") fit";
        throw Error(ErrorCode::TooShort, msg.str());
    }
    const auto rows = static_cast<Eigen::Index>(values.size() - lag);
    const auto cols = static_cast<Eigen::Index>(lag);
    Eigen::MatrixXd design(rows, cols);
    Eigen::VectorXd target(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto t = static_cast<std::size_t>(r) + lag;
        target(r) = values[t];
        for (Eigen::Index l = 0; l < cols; ++l) design(r, l) = values[t - 1 - static_cast<std::size_t>(l)];
    }

    ARModel model;
    model.lag = lag;
    Eigen::VectorXd omega;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() == cols) {
        omega = qr.solve(target);
    } else {
        Eigen::MatrixXd normal = design.transpose() * design;
        normal.diagonal().array() += kRidgeLambda;
        omega = normal.ldlt().solve(design.transpose() * target);
        model.regularized = true;
    }
    model.coefficients.assign(omega.data(), omega.data() + omega.size());
    const Eigen::VectorXd residual = target - design * omega;
    model.noise_variance = residual.squaredNorm() / static_cast<double>(rows);
    check_finite(model);
    return model;
}

std::vector<double> generate(const ARModel& model, std::span<const double> seed, std::size_t horizon) {
    const auto p = model.coefficients.size();
    if (seed.size() < p) throw Error(ErrorCode::SeedTooShort, "seed shorter than the model lag");
    std::vector<double> history(seed.end() - static_cast<std::ptrdiff_t>(p), seed.end());
    history.reserve(p + horizon);
    for (std::size_t k = 0; k < horizon; ++k)
        history.push_back(one_step_prediction(model.coefficients, history, history.size()));
    return {history.begin() + static_cast<std::ptrdiff_t>(p), history.end()};
}

double score(const ARModel& model, std::span<const double> segment) {
    const auto p = model.coefficients.size();
    if (segment.size() <= p) throw Error(ErrorCode::TooShort, "segment not longer than the model lag");
    double acc = 0.0;
    for (std::size_t t = p; t < segment.size(); ++t) {
        const double err = segment[t] - one_step_prediction(model.coefficients, segment, t);
        acc += err * err;
    }
    return acc / static_cast<double>(segment.size() - p);
}

double spectral_radius(std::span<const double> coefficients) {
    const auto p = static_cast<Eigen::Index>(coefficients.size());
    if (p == 0) return 0.0;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index l = 0; l < p; ++l) companion(0, l) = coefficients[static_cast<std::size_t>(l)];
    for (Eigen::Index r = 1; r < p; ++r) companion(r, r - 1) = 1.0;
    return companion.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace caarl
