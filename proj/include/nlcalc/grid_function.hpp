#ifndef NLCALC_GRID_FUNCTION_HPP
#define NLCALC_GRID_FUNCTION_HPP

#include <functional>
#include <string>
#include <vector>

namespace nlcalc {

/// Uniform samples of a real function on [a, b): N values at t_i = a + i h
/// with h = (b - a) / N. N must be a power of two (the spectral solver
/// relies on it) and all values finite.
class GridFunction {
public:
    GridFunction(double a, double b, std::vector<double> values);

    static GridFunction sample(double a, double b, std::size_t n,
                               const std::function<double(double)>& fn);

    double a() const { return a_; }
    double b() const { return b_; }
    std::size_t size() const { return values_.size(); }
    double spacing() const { return (b_ - a_) / static_cast<double>(values_.size()); }
    double point(std::size_t i) const { return a_ + spacing() * static_cast<double>(i); }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    bool same_grid(const GridFunction& other, double rel_tol = 1e-12) const;

    /// Piecewise-cubic (4-point Lagrange) interpolation. The admissible
    /// range is [a, a + (N-1) h]; evaluation outside throws.
    double interpolate(double t) const;
    double min_point() const { return a_; }
    double max_point() const { return a_ + spacing() * static_cast<double>(values_.size() - 1); }

private:
    double a_;
    double b_;
    std::vector<double> values_;
};

/// CSV I/O: one header line `# a=<...> b=<...> n=<...>` followed by
/// `t,value` rows at 17 significant digits, round-trip exact for doubles.
void write_csv(const GridFunction& g, const std::string& path);
GridFunction read_csv(const std::string& path);

} // namespace nlcalc

#endif
