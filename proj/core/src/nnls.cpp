#include "homdet/nnls.hpp"

#include <limits>
#include <vector>

namespace homdet {

namespace {

Eigen::VectorXd solve_passive(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                              const std::vector<int>& passive) {
    Eigen::MatrixXd ap(a.rows(), passive.size());
    for (std::size_t k = 0; k < passive.size(); ++k) ap.col(k) = a.col(passive[k]);
    return ap.colPivHouseholderQr().solve(b);
}

} // namespace

Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                     int max_iterations) {
    const int n = static_cast<int>(a.cols());
    if (max_iterations <= 0) max_iterations = 3 * n + 30;

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    std::vector<bool> in_passive(n, false);
    std::vector<int> passive;

    const double wtol = 10.0 * std::numeric_limits<double>::epsilon() *
                        a.cwiseAbs().maxCoeff() * static_cast<double>(a.rows());

    for (int iter = 0; iter < max_iterations; ++iter) {
        Eigen::VectorXd w = a.transpose() * (b - a * x);
        int best = -1;
        double best_w = wtol;
        for (int j = 0; j < n; ++j)
            if (!in_passive[j] && w(j) > best_w) {
                best_w = w(j);
                best = j;
            }
        if (best < 0) break; // KKT satisfied

        in_passive[best] = true;
        passive.push_back(best);

        Eigen::VectorXd z = solve_passive(a, b, passive);
        while (z.minCoeff() <= 0.0) {
            // Step toward z only as far as feasibility allows, then drop the
            // variables that hit zero.
            double alpha = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < passive.size(); ++k)
                if (z(k) <= 0.0) {
                    double xk = x(passive[k]);
                    alpha = std::min(alpha, xk / (xk - z(k)));
                }
            for (std::size_t k = 0; k < passive.size(); ++k) {
                int j = passive[k];
                x(j) += alpha * (z(k) - x(j));
            }
            std::vector<int> kept;
            for (int j : passive) {
                if (x(j) <= 1e-14) {
                    x(j) = 0.0;
                    in_passive[j] = false;
                } else {
                    kept.push_back(j);
                }
            }
            passive = std::move(kept);
            if (passive.empty()) {
                z.resize(0);
                break;
            }
            z = solve_passive(a, b, passive);
        }
        for (std::size_t k = 0; k < passive.size(); ++k) x(passive[k]) = z(k);
    }
    return x;
}

} // namespace homdet
