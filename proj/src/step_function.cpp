#include "rpkit/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "rpkit/errors.hpp"

namespace rpkit {

namespace {

double merge_tol(double x) { return 1e-14 * std::max(1.0, std::abs(x)); }

// Common refinement of two breakpoint lists. piece[k][i] is the index of
// function k's piece on [points[i], points[i+1]), or -1 outside its support.
struct Refinement {
    std::vector<double> points;
    std::vector<long> piece[2];
};

Refinement refine(const StepFunction& f, const StepFunction& g)
{
    std::vector<std::pair<double, int>> events;
    events.reserve(f.breakpoints().size() + g.breakpoints().size());
    for (double b : f.breakpoints())
        events.emplace_back(b, 0);
    for (double b : g.breakpoints())
        events.emplace_back(b, 1);
    std::stable_sort(events.begin(), events.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });

    Refinement r;
    std::vector<long> count[2];
    for (const auto& [x, owner] : events) {
        if (r.points.empty() || x > r.points.back() + merge_tol(r.points.back())) {
            r.points.push_back(x);
            count[0].push_back(0);
            count[1].push_back(0);
        }
        ++count[owner].back();
    }
    const long pieces[2] = {static_cast<long>(f.values().size()), static_cast<long>(g.values().size())};
    for (int k = 0; k < 2; ++k) {
        long seen = 0;
        for (std::size_t i = 0; i + 1 < r.points.size(); ++i) {
            seen += count[k][i];
            const long idx = seen - 1;
            r.piece[k].push_back(idx >= 0 && idx < pieces[k] ? idx : -1);
        }
    }
    return r;
}

double piece_value(const StepFunction& f, long idx)
{
    return idx < 0 ? 0.0 : f.values()[static_cast<std::size_t>(idx)];
}

} // namespace

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values))
{
    if (values_.empty() && breakpoints_.size() <= 1) {
        breakpoints_.clear();
        return;
    }
    if (breakpoints_.size() != values_.size() + 1)
        throw DomainError("StepFunction: need exactly one more breakpoint than values");
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        if (!std::isfinite(breakpoints_[i]))
            throw DomainError("StepFunction: breakpoints must be finite");
        if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1]))
            throw DomainError("StepFunction: breakpoints must be strictly increasing");
    }
    for (double v : values_)
        if (!std::isfinite(v))
            throw DomainError("StepFunction: values must be finite");
    canonicalize();
}

StepFunction::StepFunction(Raw, std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values))
{
    canonicalize();
}

StepFunction StepFunction::indicator(double a, double b, double value)
{
    if (!(b > a))
        throw DomainError("StepFunction::indicator needs a < b");
    return StepFunction({a, b}, {value});
}

void StepFunction::canonicalize()
{
    if (values_.empty()) {
        breakpoints_.clear();
        return;
    }
    std::vector<double> bp{breakpoints_.front()};
    std::vector<double> vals;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double right = breakpoints_[i + 1];
        if (!(right > bp.back()))
            continue; // zero-length piece
        if (!vals.empty() && vals.back() == values_[i]) {
            bp.back() = right;
        } else {
            vals.push_back(values_[i]);
            bp.push_back(right);
        }
    }
    std::size_t lo = 0, hi = vals.size();
    while (lo < hi && vals[lo] == 0.0)
        ++lo;
    while (hi > lo && vals[hi - 1] == 0.0)
        --hi;
    if (lo == hi) {
        breakpoints_.clear();
        values_.clear();
        return;
    }
    breakpoints_.assign(bp.begin() + static_cast<long>(lo), bp.begin() + static_cast<long>(hi) + 1);
    values_.assign(vals.begin() + static_cast<long>(lo), vals.begin() + static_cast<long>(hi));
}

double StepFunction::operator()(double x) const
{
    if (values_.empty() || x < breakpoints_.front() || x >= breakpoints_.back())
        return 0.0;
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

namespace {

template <class Op>
StepFunction combine(const StepFunction& f, const StepFunction& g, Op op, auto make)
{
    const auto r = refine(f, g);
    std::vector<double> vals;
    vals.reserve(r.piece[0].size());
    for (std::size_t i = 0; i < r.piece[0].size(); ++i)
        vals.push_back(op(piece_value(f, r.piece[0][i]), piece_value(g, r.piece[1][i])));
    if (vals.empty())
        return StepFunction();
    return make(r.points, vals);
}

} // namespace

StepFunction operator+(const StepFunction& f, const StepFunction& g)
{
    return combine(f, g, std::plus<>(), [](auto& p, auto& v) {
        return StepFunction(StepFunction::Raw{}, std::move(p), std::move(v));
    });
}

StepFunction operator-(const StepFunction& f, const StepFunction& g)
{
    return combine(f, g, std::minus<>(), [](auto& p, auto& v) {
        return StepFunction(StepFunction::Raw{}, std::move(p), std::move(v));
    });
}

StepFunction operator*(double c, const StepFunction& f)
{
    std::vector<double> vals = f.values_;
    for (double& v : vals)
        v *= c;
    return StepFunction(StepFunction::Raw{}, f.breakpoints_, std::move(vals));
}

double inner(const StepFunction& f, const StepFunction& g)
{
    const auto r = refine(f, g);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.piece[0].size(); ++i) {
        if (r.piece[0][i] < 0 || r.piece[1][i] < 0)
            continue;
        acc += piece_value(f, r.piece[0][i]) * piece_value(g, r.piece[1][i]) * (r.points[i + 1] - r.points[i]);
    }
    return acc;
}

double norm_squared(const StepFunction& f) { return inner(f, f); }
double norm(const StepFunction& f) { return std::sqrt(norm_squared(f)); }

StepFunction shift(const StepFunction& f, double t)
{
    std::vector<double> bp = f.breakpoints();
    for (double& b : bp)
        b += t;
    return StepFunction(std::move(bp), f.values());
}

StepFunction reflect(const StepFunction& f)
{
    std::vector<double> bp(f.breakpoints().rbegin(), f.breakpoints().rend());
    for (double& b : bp)
        b = -b;
    std::vector<double> vals(f.values().rbegin(), f.values().rend());
    return StepFunction(std::move(bp), std::move(vals));
}

StepFunction reflect_odd(const StepFunction& f) { return -reflect(f); }

StepFunction dilate(const StepFunction& f, double t)
{
    const double scale = std::exp(-t);
    const double amp = std::exp(0.5 * t);
    std::vector<double> bp = f.breakpoints();
    for (double& b : bp)
        b *= scale;
    std::vector<double> vals = f.values();
    for (double& v : vals)
        v *= amp;
    return StepFunction(std::move(bp), std::move(vals));
}

StepFunction dilate_by(const StepFunction& f, double a)
{
    if (!(a > 0.0) || !std::isfinite(a))
        throw DomainError("dilate_by: group element must be a positive real");
    const double amp = 1.0 / std::sqrt(a);
    std::vector<double> bp = f.breakpoints();
    for (double& b : bp)
        b *= a;
    std::vector<double> vals = f.values();
    for (double& v : vals)
        v *= amp;
    return StepFunction(std::move(bp), std::move(vals));
}

} // namespace rpkit
