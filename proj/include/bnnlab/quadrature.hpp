#ifndef BNNLAB_QUADRATURE_HPP
#define BNNLAB_QUADRATURE_HPP

#include <functional>
#include <stdexcept>
#include <string>

namespace bnnlab {

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
};

/// Raised when the adaptive scheme cannot certify the requested relative
/// error; carries the achieved estimate.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved_rel_error)
        : std::runtime_error(what), achieved_rel_error_(achieved_rel_error) {}
    double achieved_rel_error() const { return achieved_rel_error_; }

private:
    double achieved_rel_error_;
};

/// Adaptive Gauss-Kronrod integration of f over the finite interval
/// [lo, hi]. Throws QuadratureError if the certified relative error
/// exceeds rel_tol.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                    double rel_tol, unsigned max_depth = 15);

} // namespace bnnlab

#endif
