#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace bessel {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
};

// Thrown when the adaptive refinement hits its evaluation budget before the
// requested tolerance is met.  The best estimate so far is carried along so
// callers can decide whether it is still usable.
class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& what, QuadResult best)
        : std::runtime_error(what), best_estimate(best) {}
    QuadResult best_estimate;
};

// How the integrand decays towards +infinity; selects the substitution used
// by integrate_semi_infinite.
enum class TailDecay {
    algebraic,    // u = 1/v, good for power-law tails
    exponential,  // v = lo - log(u), good for e^{-cv} tails
};

// Adaptive bisection with a fixed Gauss-Kronrod 7-15 panel.
// tol is treated as an absolute tolerance on the whole interval.
QuadResult integrate(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-10, long max_evaluations = 1000000);

// Integral of f over [lo, inf), mapped onto a finite interval via the chosen
// substitution and handed to integrate().
QuadResult integrate_semi_infinite(const std::function<double(double)>& f, double lo,
                                   double tol = 1e-10, TailDecay decay = TailDecay::algebraic,
                                   long max_evaluations = 1000000);

}  // namespace bessel
