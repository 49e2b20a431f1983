#include "qemlab/jet.hpp"

#include <algorithm>
#include <utility>

namespace qemlab {
namespace {

// Packed-symmetric offsets; all callers pass sorted index tuples.
inline int idx2s(int i, int j) { return j * (j + 1) / 2 + i; }
inline int idx3s(int i, int j, int k) { return k * (k + 1) * (k + 2) / 6 + idx2s(i, j); }
inline int idx4s(int i, int j, int k, int l) {
    return l * (l + 1) * (l + 2) * (l + 3) / 24 + idx3s(i, j, k);
}

inline void sort2(int& i, int& j) {
    if (i > j) std::swap(i, j);
}
inline void sort3(int& i, int& j, int& k) {
    sort2(i, j); sort2(i, k); sort2(j, k);
}
inline void sort4(int& i, int& j, int& k, int& l) {
    sort2(i, j); sort2(k, l); sort2(i, k); sort2(j, l); sort2(j, k);
}

inline int size2(int n) { return n * (n + 1) / 2; }
inline int size3(int n) { return n * (n + 1) * (n + 2) / 6; }
inline int size4(int n) { return n * (n + 1) * (n + 2) * (n + 3) / 24; }

} // namespace

Jet::Jet(int dim, int order) : dim_(dim), order_(order) {
    if (dim < 1 || dim > kMaxDim)
        throw ShapeError("jet dimension out of range: " + std::to_string(dim));
    if (order < 0 || order > kMaxOrder)
        throw ShapeError("jet order out of range: " + std::to_string(order));
    if (order >= 1) d1_.assign(dim, 0.0);
    if (order >= 2) d2_.assign(size2(dim), 0.0);
    if (order >= 3) d3_.assign(size3(dim), 0.0);
    if (order >= 4) d4_.assign(size4(dim), 0.0);
}

Jet Jet::constant(int dim, int order, double value) {
    Jet j(dim, order);
    j.value_ = value;
    return j;
}

Jet Jet::variable(int dim, int order, int index, double value) {
    Jet j(dim, order);
    if (index < 0 || index >= dim)
        throw ShapeError("jet variable index out of range");
    j.value_ = value;
    if (order >= 1) j.d1_[index] = 1.0;
    return j;
}

double Jet::d1(int i) const { return order_ >= 1 ? d1_[i] : 0.0; }

double Jet::d2(int i, int j) const {
    if (order_ < 2) return 0.0;
    sort2(i, j);
    return d2_[idx2s(i, j)];
}

double Jet::d3(int i, int j, int k) const {
    if (order_ < 3) return 0.0;
    sort3(i, j, k);
    return d3_[idx3s(i, j, k)];
}

double Jet::d4(int i, int j, int k, int l) const {
    if (order_ < 4) return 0.0;
    sort4(i, j, k, l);
    return d4_[idx4s(i, j, k, l)];
}

double& Jet::at1(int i) { return d1_[i]; }

double& Jet::at2(int i, int j) {
    sort2(i, j);
    return d2_[idx2s(i, j)];
}

double& Jet::at3(int i, int j, int k) {
    sort3(i, j, k);
    return d3_[idx3s(i, j, k)];
}

double& Jet::at4(int i, int j, int k, int l) {
    sort4(i, j, k, l);
    return d4_[idx4s(i, j, k, l)];
}

Jet Jet::spatial_derivative(int i) const {
    if (order_ < 1)
        throw ShapeError("spatial_derivative needs order >= 1");
    const int n = dim_;
    Jet r(n, order_ - 1);
    r.value_ = d1_[i];
    if (r.order_ >= 1)
        for (int a = 0; a < n; ++a) r.d1_[a] = d2(i, a);
    if (r.order_ >= 2)
        for (int b = 0; b < n; ++b)
            for (int a = 0; a <= b; ++a) r.d2_[idx2s(a, b)] = d3(i, a, b);
    if (r.order_ >= 3)
        for (int c = 0; c < n; ++c)
            for (int b = 0; b <= c; ++b)
                for (int a = 0; a <= b; ++a) r.d3_[idx3s(a, b, c)] = d4(i, a, b, c);
    return r;
}

Jet Jet::truncated(int order) const {
    if (order > order_)
        throw ShapeError("cannot truncate jet upward");
    Jet r(dim_, order);
    r.value_ = value_;
    if (order >= 1) r.d1_ = d1_;
    if (order >= 2) r.d2_ = d2_;
    if (order >= 3) r.d3_ = d3_;
    if (order >= 4) r.d4_ = d4_;
    return r;
}

bool Jet::finite() const {
    if (!std::isfinite(value_)) return false;
    auto ok = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    return ok(d1_) && ok(d2_) && ok(d3_) && ok(d4_);
}

void Jet::check_pair(const Jet& o) const {
    if (dim_ != o.dim_)
        throw ShapeError("jet dimension mismatch");
}

Jet Jet::operator-() const {
    Jet r = *this;
    r *= -1.0;
    return r;
}

Jet& Jet::operator*=(double c) {
    value_ *= c;
    for (double& x : d1_) x *= c;
    for (double& x : d2_) x *= c;
    for (double& x : d3_) x *= c;
    for (double& x : d4_) x *= c;
    return *this;
}

namespace {

// Truncate `v` in place so that `a op= b` works when b has lower order.
void shrink_to(std::vector<double>& v, std::size_t n) {
    if (v.size() > n) v.resize(n);
}

template <typename Op>
void zip(std::vector<double>& a, const std::vector<double>& b, Op op) {
    const std::size_t n = std::min(a.size(), b.size());
    shrink_to(a, n);
    for (std::size_t i = 0; i < n; ++i) op(a[i], b[i]);
}

} // namespace

Jet& Jet::operator+=(const Jet& o) {
    check_pair(o);
    order_ = std::min(order_, o.order_);
    value_ += o.value_;
    zip(d1_, o.d1_, [](double& a, double b) { a += b; });
    zip(d2_, o.d2_, [](double& a, double b) { a += b; });
    zip(d3_, o.d3_, [](double& a, double b) { a += b; });
    zip(d4_, o.d4_, [](double& a, double b) { a += b; });
    if (order_ < 4) d4_.clear();
    if (order_ < 3) d3_.clear();
    if (order_ < 2) d2_.clear();
    if (order_ < 1) d1_.clear();
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    check_pair(o);
    order_ = std::min(order_, o.order_);
    value_ -= o.value_;
    zip(d1_, o.d1_, [](double& a, double b) { a -= b; });
    zip(d2_, o.d2_, [](double& a, double b) { a -= b; });
    zip(d3_, o.d3_, [](double& a, double b) { a -= b; });
    zip(d4_, o.d4_, [](double& a, double b) { a -= b; });
    if (order_ < 4) d4_.clear();
    if (order_ < 3) d3_.clear();
    if (order_ < 2) d2_.clear();
    if (order_ < 1) d1_.clear();
    return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
    a.check_pair(b);
    const int n = a.dim_;
    const int ord = std::min(a.order_, b.order_);
    Jet r(n, ord);
    r.value_ = a.value_ * b.value_;
    if (ord >= 1)
        for (int i = 0; i < n; ++i)
            r.d1_[i] = a.value_ * b.d1_[i] + a.d1_[i] * b.value_;
    if (ord >= 2)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i <= j; ++i)
                r.d2_[idx2s(i, j)] = a.value_ * b.d2(i, j) + a.d1_[i] * b.d1_[j] +
                                     a.d1_[j] * b.d1_[i] + a.d2(i, j) * b.value_;
    if (ord >= 3)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j <= k; ++j)
                for (int i = 0; i <= j; ++i)
                    r.d3_[idx3s(i, j, k)] =
                        a.value_ * b.d3(i, j, k) + a.d1_[i] * b.d2(j, k) +
                        a.d1_[j] * b.d2(i, k) + a.d1_[k] * b.d2(i, j) +
                        a.d2(j, k) * b.d1_[i] + a.d2(i, k) * b.d1_[j] +
                        a.d2(i, j) * b.d1_[k] + a.d3(i, j, k) * b.value_;
    if (ord >= 4)
        for (int l = 0; l < n; ++l)
            for (int k = 0; k <= l; ++k)
                for (int j = 0; j <= k; ++j)
                    for (int i = 0; i <= j; ++i)
                        r.d4_[idx4s(i, j, k, l)] =
                            a.value_ * b.d4(i, j, k, l) +
                            a.d1_[i] * b.d3(j, k, l) + a.d1_[j] * b.d3(i, k, l) +
                            a.d1_[k] * b.d3(i, j, l) + a.d1_[l] * b.d3(i, j, k) +
                            a.d2(i, j) * b.d2(k, l) + a.d2(i, k) * b.d2(j, l) +
                            a.d2(i, l) * b.d2(j, k) + a.d2(j, k) * b.d2(i, l) +
                            a.d2(j, l) * b.d2(i, k) + a.d2(k, l) * b.d2(i, j) +
                            a.d3(j, k, l) * b.d1_[i] + a.d3(i, k, l) * b.d1_[j] +
                            a.d3(i, j, l) * b.d1_[k] + a.d3(i, j, k) * b.d1_[l] +
                            a.d4(i, j, k, l) * b.value_;
    return r;
}

Jet Jet::compose(const Jet& u, std::span<const double> c) {
    const int n = u.dim_;
    const int ord = u.order_;
    if (static_cast<int>(c.size()) < ord + 1)
        throw ShapeError("compose: not enough outer derivatives");
    Jet r(n, ord);
    r.value_ = c[0];
    if (ord >= 1)
        for (int i = 0; i < n; ++i) r.d1_[i] = c[1] * u.d1_[i];
    if (ord >= 2)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i <= j; ++i)
                r.d2_[idx2s(i, j)] = c[2] * u.d1_[i] * u.d1_[j] + c[1] * u.d2(i, j);
    if (ord >= 3)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j <= k; ++j)
                for (int i = 0; i <= j; ++i)
                    r.d3_[idx3s(i, j, k)] =
                        c[3] * u.d1_[i] * u.d1_[j] * u.d1_[k] +
                        c[2] * (u.d2(i, j) * u.d1_[k] + u.d2(i, k) * u.d1_[j] +
                                u.d2(j, k) * u.d1_[i]) +
                        c[1] * u.d3(i, j, k);
    if (ord >= 4)
        for (int l = 0; l < n; ++l)
            for (int k = 0; k <= l; ++k)
                for (int j = 0; j <= k; ++j)
                    for (int i = 0; i <= j; ++i) {
                        // Faa di Bruno over the 15 partitions of four slots.
                        const double p1 = u.d1_[i], p2 = u.d1_[j], p3 = u.d1_[k],
                                     p4 = u.d1_[l];
                        double s = c[4] * p1 * p2 * p3 * p4;
                        s += c[3] * (u.d2(i, j) * p3 * p4 + u.d2(i, k) * p2 * p4 +
                                     u.d2(i, l) * p2 * p3 + u.d2(j, k) * p1 * p4 +
                                     u.d2(j, l) * p1 * p3 + u.d2(k, l) * p1 * p2);
                        s += c[2] * (u.d2(i, j) * u.d2(k, l) + u.d2(i, k) * u.d2(j, l) +
                                     u.d2(i, l) * u.d2(j, k));
                        s += c[2] * (u.d3(j, k, l) * p1 + u.d3(i, k, l) * p2 +
                                     u.d3(i, j, l) * p3 + u.d3(i, j, k) * p4);
                        s += c[1] * u.d4(i, j, k, l);
                        r.d4_[idx4s(i, j, k, l)] = s;
                    }
    return r;
}

Jet operator/(const Jet& a, const Jet& b) {
    if (b.value_ == 0.0)
        throw NumericError("jet division by zero value");
    const double v = b.value_;
    const double iv = 1.0 / v;
    const double c[5] = {iv, -iv * iv, 2.0 * iv * iv * iv, -6.0 * iv * iv * iv * iv,
                         24.0 * iv * iv * iv * iv * iv};
    const int ord = std::min(a.order_, b.order_);
    return a.truncated(ord) * Jet::compose(b.truncated(ord), std::span<const double>(c, ord + 1));
}

Jet operator/(double c0, const Jet& b) {
    if (b.value_ == 0.0)
        throw NumericError("jet division by zero value");
    const double iv = 1.0 / b.value_;
    const double c[5] = {c0 * iv, -c0 * iv * iv, 2.0 * c0 * iv * iv * iv,
                         -6.0 * c0 * iv * iv * iv * iv, 24.0 * c0 * iv * iv * iv * iv * iv};
    return Jet::compose(b, std::span<const double>(c, b.order_ + 1));
}

Jet sin(const Jet& u) {
    const double s = std::sin(u.value()), c = std::cos(u.value());
    const double d[5] = {s, c, -s, -c, s};
    return Jet::compose(u, std::span<const double>(d, u.order() + 1));
}

Jet cos(const Jet& u) {
    const double s = std::sin(u.value()), c = std::cos(u.value());
    const double d[5] = {c, -s, -c, s, c};
    return Jet::compose(u, std::span<const double>(d, u.order() + 1));
}

Jet sinh(const Jet& u) {
    const double s = std::sinh(u.value()), c = std::cosh(u.value());
    const double d[5] = {s, c, s, c, s};
    return Jet::compose(u, std::span<const double>(d, u.order() + 1));
}

Jet cosh(const Jet& u) {
    const double s = std::sinh(u.value()), c = std::cosh(u.value());
    const double d[5] = {c, s, c, s, c};
    return Jet::compose(u, std::span<const double>(d, u.order() + 1));
}

Jet exp(const Jet& u) {
    const double e = std::exp(u.value());
    const double d[5] = {e, e, e, e, e};
    return Jet::compose(u, std::span<const double>(d, u.order() + 1));
}

Jet log(const Jet& u) {
    if (u.value() <= 0.0)
        throw NumericError("jet log of non-positive value");
    const double v = u.value(), iv = 1.0 / v;
    const double d[5] = {std::log(v), iv, -iv * iv, 2.0 * iv * iv * iv,
                         -6.0 * iv * iv * iv * iv};
    return Jet::compose(u, std::span<const double>(d, u.order() + 1));
}

Jet sqrt(const Jet& u) {
    if (u.value() <= 0.0)
        throw NumericError("jet sqrt of non-positive value");
    const double s = std::sqrt(u.value());
    const double d[5] = {s, 0.5 / s, -0.25 / (s * s * s), 0.375 / (s * s * s * s * s),
                         -0.9375 / (s * s * s * s * s * s * s)};
    return Jet::compose(u, std::span<const double>(d, u.order() + 1));
}

Jet pow(const Jet& u, double p) {
    const double v = u.value();
    double d[5];
    d[0] = std::pow(v, p);
    double coeff = p;
    for (int k = 1; k <= u.order(); ++k) {
        d[k] = coeff * std::pow(v, p - k);
        coeff *= (p - k);
    }
    return Jet::compose(u, std::span<const double>(d, u.order() + 1));
}

} // namespace qemlab
