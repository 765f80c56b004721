#pragma once

#include <span>
#include <vector>

namespace rpkit {

/// Compactly supported piecewise-constant function on R, value values[i] on
/// [breakpoints[i], breakpoints[i+1]). Always held in canonical form: adjacent
/// equal values merged, zero boundary pieces stripped; the zero function has no
/// breakpoints. Breakpoints closer than 1e-14 * max(1, |b|) are merged by the
/// arithmetic operations.
class StepFunction {
public:
    StepFunction() = default;
    StepFunction(std::vector<double> breakpoints, std::vector<double> values);

    /// value * chi_[a, b)
    static StepFunction indicator(double a, double b, double value = 1.0);

    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    const std::vector<double>& values() const noexcept { return values_; }
    bool is_zero() const noexcept { return values_.empty(); }

    double operator()(double x) const;

    friend StepFunction operator+(const StepFunction& f, const StepFunction& g);
    friend StepFunction operator-(const StepFunction& f, const StepFunction& g);
    friend StepFunction operator*(double c, const StepFunction& f);
    StepFunction operator-() const { return -1.0 * *this; }

    bool operator==(const StepFunction&) const = default;

private:
    struct Raw {};
    StepFunction(Raw, std::vector<double> breakpoints, std::vector<double> values);
    void canonicalize();

    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

/// Exact L^2 inner product: sum over common refinement of value products times lengths.
double inner(const StepFunction& f, const StepFunction& g);
double norm_squared(const StepFunction& f);
double norm(const StepFunction& f);

/// (S_t f)(x) = f(x - t)
StepFunction shift(const StepFunction& f, double t);
/// (theta f)(x) = f(-x)
StepFunction reflect(const StepFunction& f);
/// (theta f)(x) = -f(-x); the involution under which theta b_t = b_{-t} for the Brownian cocycle.
StepFunction reflect_odd(const StepFunction& f);
/// (tau_t f)(x) = e^{t/2} f(e^t x)
StepFunction dilate(const StepFunction& f, double t);
/// Unitary dilation by a group element a > 0: (U_a f)(x) = a^{-1/2} f(x / a).
StepFunction dilate_by(const StepFunction& f, double a);

} // namespace rpkit
