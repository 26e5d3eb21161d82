#include "ppcshape/modal_solver.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <string>

namespace ppcshape {

SensorPlacement::SensorPlacement(std::vector<double> locations) : locations_(std::move(locations)) {
    if (locations_.empty()) {
        throw Error(ErrorCode::invalid_argument, "sensor placement needs at least one location");
    }
    double prev = 0.0;
    for (double s : locations_) {
        if (!(s > prev) || s > 1.0) {
            throw Error(ErrorCode::invalid_argument,
                        "sensor locations must satisfy 0 < s0 < s1 < ... <= 1, got " + std::to_string(s));
        }
        prev = s;
    }
}

Eigen::MatrixXd build_system(const SensorPlacement& placement, int order) {
    const auto rows = static_cast<Eigen::Index>(placement.size());
    const Eigen::Index cols = order < 0 ? rows : order + 1;
    Eigen::MatrixXd a(rows, cols);
    for (Eigen::Index j = 0; j < rows; ++j) {
        const double s = placement[static_cast<std::size_t>(j)];
        double power = s;
        for (Eigen::Index k = 0; k < cols; ++k) {
            a(j, k) = power / static_cast<double>(k + 1);
            power *= s;
        }
    }
    return a;
}

double system_determinant(const SensorPlacement& placement) {
    const auto s = placement.locations();
    double det = 1.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        det *= s[i] / static_cast<double>(i + 1);
        for (std::size_t j = 0; j < i; ++j) {
            det *= s[i] - s[j];
        }
    }
    return det;
}

double placement_conditioning(const SensorPlacement& placement, int order) {
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(build_system(placement, order));
    const auto& sv = svd.singularValues();
    const double smallest = sv(sv.size() - 1);
    if (smallest == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return sv(0) / smallest;
}

ModalSolver::ModalSolver(SensorPlacement placement, int order, SolveOptions options)
    : placement_(std::move(placement)), order_(order), options_(options) {
    if (order_ < 0) {
        throw Error(ErrorCode::invalid_argument, "order must be non-negative");
    }
    const auto needed = static_cast<std::size_t>(order_) + 1;
    if (placement_.size() < needed) {
        throw Error(ErrorCode::configuration, "order " + std::to_string(order_) + " needs " +
                                                  std::to_string(needed) + " sensors, got " +
                                                  std::to_string(placement_.size()));
    }
    if (placement_.size() > needed && !options_.least_squares) {
        throw Error(ErrorCode::configuration, "order " + std::to_string(order_) + " needs exactly " +
                                                  std::to_string(needed) + " sensors (got " +
                                                  std::to_string(placement_.size()) +
                                                  "); enable least squares to use more");
    }
    system_ = build_system(placement_, order_);
    condition_ = placement_conditioning(placement_, order_);
    if (placement_.size() == needed) {
        lu_.compute(system_);
    } else {
        qr_.compute(system_);
    }
}

ModalConfig ModalSolver::solve(std::span<const double> alphas) const {
    if (alphas.size() != placement_.size()) {
        throw Error(ErrorCode::invalid_argument, "orientation count does not match sensor count");
    }
    if (ill_conditioned() && !options_.best_effort) {
        throw Error(ErrorCode::ill_conditioned,
                    "sensor placement condition number " + std::to_string(condition_) + " exceeds threshold");
    }
    Eigen::VectorXd b(static_cast<Eigen::Index>(alphas.size()));
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (!std::isfinite(alphas[i])) {
            throw Error(ErrorCode::invalid_argument, "orientations must be finite");
        }
        b(static_cast<Eigen::Index>(i)) = alphas[i];
    }
    const Eigen::VectorXd theta = placement_.size() == static_cast<std::size_t>(order_) + 1
                                      ? Eigen::VectorXd(lu_.solve(b))
                                      : Eigen::VectorXd(qr_.solve(b));
    return ModalConfig(std::vector<double>(theta.data(), theta.data() + theta.size()));
}

ModalConfig solve_modal(const SensorPlacement& placement, std::span<const double> alphas, SolveOptions options) {
    const ModalSolver solver(placement, static_cast<int>(placement.size()) - 1, options);
    return solver.solve(alphas);
}

}  // namespace ppcshape
