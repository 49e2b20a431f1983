#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "qemlab/errors.hpp"

namespace qemlab {

// Truncated multivariate Taylor expansion (a "jet") of a scalar function at a
// point, in up to kMaxDim variables and up to derivative order kMaxOrder.
//
// Partial derivative tensors are stored packed-symmetric: the order-2 block
// keeps one entry per pair i <= j, the order-3 block one entry per triple
// i <= j <= k, and so on.  Every arithmetic routine writes canonical entries
// only, so symmetry of mixed partials holds exactly, not just to rounding.
//
// Arithmetic on two jets requires equal variable counts; the result order is
// the smaller of the two operand orders.  Elementary functions go through
// compose(), which applies Faa di Bruno's formula with hard-coded partition
// tables (orders up to 4 only).
class Jet {
public:
    static constexpr int kMaxOrder = 4;
    static constexpr int kMaxDim = 8;

    Jet() = default;

    // Zero jet: value 0, all derivatives 0.
    Jet(int dim, int order);

    static Jet constant(int dim, int order, double value);

    // Seed jet for coordinate `index`: value v, d/dx_index = 1.
    static Jet variable(int dim, int order, int index, double value);

    int dim() const { return dim_; }
    int order() const { return order_; }

    double value() const { return value_; }
    double d1(int i) const;
    double d2(int i, int j) const;
    double d3(int i, int j, int k) const;
    double d4(int i, int j, int k, int l) const;

    double& value() { return value_; }
    double& at1(int i);
    double& at2(int i, int j);
    double& at3(int i, int j, int k);
    double& at4(int i, int j, int k, int l);

    // Jet of the partial derivative d/dx_i, one order lower.
    Jet spatial_derivative(int i) const;

    // Copy truncated to a lower (or equal) order.
    Jet truncated(int order) const;

    bool finite() const;

    Jet operator-() const;
    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator+=(double c) { value_ += c; return *this; }
    Jet& operator-=(double c) { value_ -= c; return *this; }
    Jet& operator*=(double c);

    friend Jet operator+(Jet a, const Jet& b) { a += b; return a; }
    friend Jet operator-(Jet a, const Jet& b) { a -= b; return a; }
    friend Jet operator+(Jet a, double c) { a += c; return a; }
    friend Jet operator+(double c, Jet a) { a += c; return a; }
    friend Jet operator-(Jet a, double c) { a -= c; return a; }
    friend Jet operator-(double c, const Jet& a) { Jet r = -a; r += c; return r; }
    friend Jet operator*(Jet a, double c) { a *= c; return a; }
    friend Jet operator*(double c, Jet a) { a *= c; return a; }
    friend Jet operator/(Jet a, double c) { a *= 1.0 / c; return a; }

    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator/(double c, const Jet& b);

    // Chain rule: outer_derivs[k] is the k-th derivative of the outer
    // function evaluated at u.value(); outer_derivs.size() >= u.order()+1.
    static Jet compose(const Jet& u, std::span<const double> outer_derivs);

private:
    void check_pair(const Jet& o) const;

    int dim_ = 0;
    int order_ = 0;
    double value_ = 0.0;
    std::vector<double> d1_, d2_, d3_, d4_;
};

Jet sin(const Jet& u);
Jet cos(const Jet& u);
Jet sinh(const Jet& u);
Jet cosh(const Jet& u);
Jet exp(const Jet& u);
Jet log(const Jet& u);
Jet sqrt(const Jet& u);
Jet pow(const Jet& u, double p);

} // namespace qemlab
