#include "bnnlab/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace bnnlab {

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                    double rel_tol, unsigned max_depth) {
    double error = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, lo, hi, max_depth, rel_tol, &error, &l1);
    const double scale = std::max(std::fabs(value), 1e-300);
    const double achieved = error / scale;
    if (!(achieved <= rel_tol) || !std::isfinite(value)) {
        throw QuadratureError(
            "integrate_adaptive: requested relative error " + std::to_string(rel_tol) +
                " not certified; achieved estimate " + std::to_string(achieved),
            achieved);
    }
    return {value, error};
}

} // namespace bnnlab
