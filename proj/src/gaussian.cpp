#include "splitbeam/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include <json.hpp>

#include "splitbeam/errors.hpp"

namespace splitbeam {

namespace {

void check_mode(const GaussianState& s, int mode, const char* who) {
    if (mode < 0 || mode >= s.n_modes)
        throw std::out_of_range(std::string(who) + ": mode index out of range");
}

Eigen::Matrix2d rotation(double angle) {
    Eigen::Matrix2d r;
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return r;
}

} // namespace

SqueezerSpec SqueezerSpec::from_db(double squeezing_db, double theta) {
    if (squeezing_db < 0.0)
        throw std::domain_error("SqueezerSpec: squeezing_db must be >= 0");
    SqueezerSpec s;
    s.r = squeezing_db * std::numbers::ln10 / 20.0;
    s.theta = theta;
    return s;
}

double SqueezerSpec::squeezing_db() const { return 20.0 * r / std::numbers::ln10; }
double SqueezerSpec::squeezed_variance() const { return std::exp(-2.0 * r); }
double SqueezerSpec::anti_squeezed_variance() const { return std::exp(2.0 * r); }

GaussianState vacuum(int n_modes) {
    if (n_modes < 1)
        throw std::invalid_argument("vacuum: need at least one mode");
    GaussianState s;
    s.n_modes = n_modes;
    s.mean = Eigen::VectorXd::Zero(2 * n_modes);
    s.cov = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
    s.flux = 0.0;
    return s;
}

GaussianState set_coherent(GaussianState state, int mode, cplx amplitude) {
    return set_coherent(std::move(state), mode, amplitude, std::norm(amplitude));
}

GaussianState set_coherent(GaussianState state, int mode, cplx amplitude, double flux) {
    check_mode(state, mode, "set_coherent");
    if (flux < 0.0)
        throw std::domain_error("set_coherent: flux must be >= 0");
    if (flux == 0.0) {
        state.mean(2 * mode) = 0.0;
        state.mean(2 * mode + 1) = 0.0;
        state.flux = 0.0;
        return state;
    }
    const double mag = std::abs(amplitude);
    if (mag == 0.0)
        throw degenerate_input("set_coherent: zero amplitude cannot carry nonzero flux");
    const double scale = 2.0 * std::sqrt(flux) / mag;  // <X> = 2 Re alpha at |alpha|^2 = N
    state.mean(2 * mode) = scale * amplitude.real();
    state.mean(2 * mode + 1) = scale * amplitude.imag();
    state.flux = flux;
    return state;
}

GaussianState set_squeezed_vacuum(GaussianState state, int mode, const SqueezerSpec& spec) {
    check_mode(state, mode, "set_squeezed_vacuum");
    Eigen::Matrix2d block = Eigen::Matrix2d::Zero();
    block(0, 0) = spec.squeezed_variance();
    block(1, 1) = spec.anti_squeezed_variance();
    const Eigen::Matrix2d r = rotation(spec.theta);
    state.cov.block<2, 2>(2 * mode, 2 * mode) = r * block * r.transpose();
    return state;
}

GaussianState apply_beamsplitter(GaussianState state, int i, int j,
                                 double reflectivity, double phase) {
    check_mode(state, i, "apply_beamsplitter");
    check_mode(state, j, "apply_beamsplitter");
    if (i == j)
        throw std::invalid_argument("apply_beamsplitter: modes must differ");
    if (!(reflectivity >= 0.0 && reflectivity <= 1.0))
        throw std::domain_error("apply_beamsplitter: reflectivity must lie in [0, 1]");
    const double r = std::sqrt(reflectivity);
    const double t = std::sqrt(1.0 - reflectivity);
    const int d = 2 * state.n_modes;
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(d, d);
    // output j = sqrt(R) (input i) + sqrt(1-R) (input j): R = 1 swaps the labels
    s.block<2, 2>(2 * i, 2 * i) = t * Eigen::Matrix2d::Identity();
    s.block<2, 2>(2 * i, 2 * j) = r * rotation(phase);
    s.block<2, 2>(2 * j, 2 * i) = -r * rotation(-phase);
    s.block<2, 2>(2 * j, 2 * j) = t * Eigen::Matrix2d::Identity();
    state.mean = s * state.mean;
    state.cov = s * state.cov * s.transpose();
    return state;
}

GaussianState apply_loss(GaussianState state, int mode, double efficiency) {
    check_mode(state, mode, "apply_loss");
    if (!(efficiency >= 0.0 && efficiency <= 1.0))
        throw std::domain_error("apply_loss: efficiency must lie in [0, 1]");
    const double se = std::sqrt(efficiency);
    state.cov.row(2 * mode) *= se;
    state.cov.row(2 * mode + 1) *= se;
    state.cov.col(2 * mode) *= se;
    state.cov.col(2 * mode + 1) *= se;
    state.cov(2 * mode, 2 * mode) += 1.0 - efficiency;
    state.cov(2 * mode + 1, 2 * mode + 1) += 1.0 - efficiency;
    state.mean(2 * mode) *= se;
    state.mean(2 * mode + 1) *= se;
    state.flux *= efficiency;
    return state;
}

double db_from_variance(double variance) {
    if (!(variance > 0.0))
        throw std::domain_error("db_from_variance: variance must be positive");
    return 10.0 * std::log10(variance);
}

double variance_from_db(double db) { return std::pow(10.0, db / 10.0); }

double physicality_margin(const GaussianState& state) {
    const int d = 2 * state.n_modes;
    Eigen::MatrixXcd m = state.cov.cast<cplx>();
    for (int k = 0; k < state.n_modes; ++k) {
        m(2 * k, 2 * k + 1) += cplx(0.0, 1.0);
        m(2 * k + 1, 2 * k) += cplx(0.0, -1.0);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    (void)d;
    return solver.eigenvalues().minCoeff();
}

bool is_physical(const GaussianState& state, double tol) {
    if ((state.cov - state.cov.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        return false;
    return physicality_margin(state) >= -tol;
}

double mean_photons(const GaussianState& state, int mode) {
    check_mode(state, mode, "mean_photons");
    const double mx = state.mean(2 * mode);
    const double my = state.mean(2 * mode + 1);
    const double tr = state.cov(2 * mode, 2 * mode) + state.cov(2 * mode + 1, 2 * mode + 1);
    return (mx * mx + my * my + tr - 2.0) / 4.0;
}

std::string to_json(const GaussianState& state) {
    nlohmann::json j;
    j["n_modes"] = state.n_modes;
    j["flux"] = state.flux;
    j["mean"] = std::vector<double>(state.mean.data(), state.mean.data() + state.mean.size());
    std::vector<double> cov;
    cov.reserve(static_cast<size_t>(state.cov.size()));
    for (int r = 0; r < state.cov.rows(); ++r)
        for (int c = 0; c < state.cov.cols(); ++c) cov.push_back(state.cov(r, c));
    j["cov"] = cov;
    return j.dump(2);
}

GaussianState state_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    GaussianState s;
    s.n_modes = j.at("n_modes").get<int>();
    if (s.n_modes < 1)
        throw std::invalid_argument("state_from_json: invalid n_modes");
    s.flux = j.at("flux").get<double>();
    const auto mean = j.at("mean").get<std::vector<double>>();
    const auto cov = j.at("cov").get<std::vector<double>>();
    const int d = 2 * s.n_modes;
    if (mean.size() != static_cast<size_t>(d) || cov.size() != static_cast<size_t>(d * d))
        throw std::invalid_argument("state_from_json: dimension mismatch");
    s.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), d);
    s.cov = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                cov.data(), d, d);
    return s;
}

} // namespace splitbeam
