#pragma once

#include "ppcshape/ppc_core.hpp"

#include <Eigen/Core>
#include <Eigen/LU>
#include <Eigen/QR>

#include <span>
#include <vector>

namespace ppcshape {

/// Sensor arc locations on one segment, strictly increasing in (0, 1].
class SensorPlacement {
public:
    explicit SensorPlacement(std::vector<double> locations);
    SensorPlacement(std::initializer_list<double> locations)
        : SensorPlacement(std::vector<double>(locations)) {}

    [[nodiscard]] std::span<const double> locations() const noexcept { return locations_; }
    [[nodiscard]] std::size_t size() const noexcept { return locations_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return locations_.at(i); }

private:
    std::vector<double> locations_;
};

/// Orientation system matrix, A[j][k] = s_j^{k+1}/(k+1), with one row per
/// sensor and `order + 1` columns. `order` defaults to size − 1 (square).
[[nodiscard]] Eigen::MatrixXd build_system(const SensorPlacement& placement, int order = -1);

/// det(A) for the square system, from the product formula
/// (Π s_k)/(m+1)! · Π_{j<i} (s_i − s_j). Positive for every valid placement.
[[nodiscard]] double system_determinant(const SensorPlacement& placement);

/// 2-norm condition number of A (ratio of extreme singular values).
[[nodiscard]] double placement_conditioning(const SensorPlacement& placement, int order = -1);

struct SolveOptions {
    double conditioning_threshold = 1e8;
    /// Solve even when the condition number exceeds the threshold.
    bool best_effort = false;
    /// Accept more sensors than order + 1 and solve in least squares.
    bool least_squares = false;
};

/// Factored orientation system for one placement. The factorization is
/// computed once and is safe to share read-only between threads.
class ModalSolver {
public:
    ModalSolver(SensorPlacement placement, int order, SolveOptions options = {});

    /// Θ with AΘ = α (least-squares residual minimizer when overdetermined).
    /// Throws ill_conditioned unless best_effort is set.
    [[nodiscard]] ModalConfig solve(std::span<const double> alphas) const;

    [[nodiscard]] const SensorPlacement& placement() const noexcept { return placement_; }
    [[nodiscard]] int order() const noexcept { return order_; }
    [[nodiscard]] double condition_number() const noexcept { return condition_; }
    [[nodiscard]] bool ill_conditioned() const noexcept {
        return condition_ > options_.conditioning_threshold;
    }
    [[nodiscard]] const Eigen::MatrixXd& matrix() const noexcept { return system_; }

private:
    SensorPlacement placement_;
    int order_;
    SolveOptions options_;
    Eigen::MatrixXd system_;
    double condition_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
};

/// One-shot square solve; order is placement.size() − 1.
[[nodiscard]] ModalConfig solve_modal(const SensorPlacement& placement, std::span<const double> alphas,
                                      SolveOptions options = {});

}  // namespace ppcshape
