#include "cicurv/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

namespace cicurv {

long long binomial(long long a, long long b) {
    if (b < 0 || b > a) return 0;
    b = std::min(b, a - b);
    long long r = 1;
    for (long long i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
}

long long monomial_count(int d, int l) { return binomial(d + l, d); }

PolynomialMap::PolynomialMap(int n, int m) : n_(n), m_(m) {
    if (n < 0 || m < 0) throw std::invalid_argument("PolynomialMap: negative dimension");
}

void PolynomialMap::add_term(int j, const MultiIndex& alpha, Complex c) {
    if (j < 0 || j >= m_) throw std::invalid_argument("PolynomialMap: component out of range");
    if (static_cast<int>(alpha.size()) != n_)
        throw std::invalid_argument("PolynomialMap: multi-index length mismatch");
    for (int a : alpha)
        if (a < 0) throw std::invalid_argument("PolynomialMap: negative exponent");
    auto key = Key{j, alpha};
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        if (c != Complex(0.0)) terms_.emplace(std::move(key), c);
    } else {
        it->second += c;
        if (it->second == Complex(0.0)) terms_.erase(it);
    }
}

Complex PolynomialMap::coeff(int j, const MultiIndex& alpha) const {
    auto it = terms_.find(Key{j, alpha});
    return it == terms_.end() ? Complex(0.0) : it->second;
}

int PolynomialMap::degree() const {
    int deg = -1;
    for (const auto& [key, c] : terms_)
        deg = std::max(deg, std::accumulate(key.second.begin(), key.second.end(), 0));
    return deg;
}

PolynomialMap PolynomialMap::pruned(double tol) const {
    PolynomialMap r(n_, m_);
    for (const auto& [key, c] : terms_)
        if (std::abs(c) > tol) r.terms_.emplace(key, c);
    return r;
}

Eigen::VectorXcd PolynomialMap::evaluate(const Eigen::VectorXcd& z) const {
    if (z.size() != n_) throw std::invalid_argument("PolynomialMap::evaluate: bad point size");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(m_);
    for (const auto& [key, c] : terms_) {
        Complex mono = 1.0;
        for (int i = 0; i < n_; ++i)
            for (int k = 0; k < key.second[i]; ++k) mono *= z(i);
        v(key.first) += c * mono;
    }
    return v;
}

Eigen::MatrixXcd PolynomialMap::jacobian(const Eigen::VectorXcd& z) const {
    Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(m_, n_);
    for (const auto& [key, c] : terms_) {
        for (int i = 0; i < n_; ++i) {
            int a = key.second[i];
            if (a == 0) continue;
            Complex mono = static_cast<double>(a);
            for (int v = 0; v < n_; ++v) {
                int e = key.second[v] - (v == i ? 1 : 0);
                for (int k = 0; k < e; ++k) mono *= z(v);
            }
            J(key.first, i) += c * mono;
        }
    }
    return J;
}

Eigen::MatrixXcd PolynomialMap::hessian(int j, const Eigen::VectorXcd& z) const {
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n_, n_);
    for (const auto& [key, c] : terms_) {
        if (key.first != j) continue;
        for (int i1 = 0; i1 < n_; ++i1) {
            for (int i2 = i1; i2 < n_; ++i2) {
                MultiIndex a = key.second;
                double f = a[i1];
                if (f == 0) continue;
                a[i1] -= 1;
                f *= a[i2];
                if (f == 0) continue;
                a[i2] -= 1;
                Complex mono = f;
                for (int v = 0; v < n_; ++v)
                    for (int k = 0; k < a[v]; ++k) mono *= z(v);
                H(i1, i2) += c * mono;
                if (i2 != i1) H(i2, i1) += c * mono;
            }
        }
    }
    return H;
}

PolynomialMap PolynomialMap::derivative(int var) const {
    PolynomialMap r(n_, m_);
    for (const auto& [key, c] : terms_) {
        int a = key.second[var];
        if (a == 0) continue;
        MultiIndex alpha = key.second;
        alpha[var] -= 1;
        r.add_term(key.first, alpha, c * static_cast<double>(a));
    }
    return r;
}

namespace {

// Sparse univariate-free polynomial in n variables, used while expanding.
using MonoMap = std::map<MultiIndex, Complex>;

MonoMap mono_mul(const MonoMap& a, const MonoMap& b, int n) {
    MonoMap r;
    for (const auto& [ka, ca] : a) {
        for (const auto& [kb, cb] : b) {
            MultiIndex k(n);
            for (int i = 0; i < n; ++i) k[i] = ka[i] + kb[i];
            r[k] += ca * cb;
        }
    }
    return r;
}

}  // namespace

PolynomialMap PolynomialMap::translated(const Eigen::VectorXcd& t) const {
    if (t.size() != n_) throw std::invalid_argument("PolynomialMap::translated: bad shift size");
    PolynomialMap r(n_, m_);
    for (const auto& [key, c] : terms_) {
        MonoMap acc{{MultiIndex(n_, 0), c}};
        for (int i = 0; i < n_; ++i) {
            int a = key.second[i];
            if (a == 0) continue;
            // (z_i + t_i)^a
            MonoMap factor;
            for (int k = 0; k <= a; ++k) {
                MultiIndex mi(n_, 0);
                mi[i] = k;
                Complex coef = static_cast<double>(binomial(a, k));
                Complex tp = 1.0;
                for (int q = 0; q < a - k; ++q) tp *= t(i);
                factor[mi] = coef * tp;
            }
            acc = mono_mul(acc, factor, n_);
        }
        for (const auto& [alpha, cc] : acc) r.add_term(key.first, alpha, cc);
    }
    return r.pruned();
}

PolynomialMap PolynomialMap::composed_linear(const Eigen::MatrixXcd& A) const {
    return composed_affine(A, Eigen::VectorXcd::Zero(n_));
}

PolynomialMap PolynomialMap::composed_affine(const Eigen::MatrixXcd& A,
                                             const Eigen::VectorXcd& b) const {
    if (A.rows() != n_ || A.cols() != n_ || b.size() != n_)
        throw std::invalid_argument("PolynomialMap::composed_affine: bad map shape");
    PolynomialMap r(n_, m_);
    for (const auto& [key, c] : terms_) {
        MonoMap acc{{MultiIndex(n_, 0), c}};
        for (int i = 0; i < n_; ++i) {
            for (int rep = 0; rep < key.second[i]; ++rep) {
                MonoMap lin;
                if (b(i) != Complex(0.0)) lin[MultiIndex(n_, 0)] = b(i);
                for (int v = 0; v < n_; ++v) {
                    if (A(i, v) == Complex(0.0)) continue;
                    MultiIndex mi(n_, 0);
                    mi[v] = 1;
                    lin[mi] += A(i, v);
                }
                acc = mono_mul(acc, lin, n_);
            }
        }
        for (const auto& [alpha, cc] : acc) r.add_term(key.first, alpha, cc);
    }
    return r.pruned();
}

PolynomialMap PolynomialMap::truncated(int l) const {
    PolynomialMap r(n_, m_);
    for (const auto& [key, c] : terms_)
        if (std::accumulate(key.second.begin(), key.second.end(), 0) <= l)
            r.terms_.emplace(key, c);
    return r;
}

PolynomialMap PolynomialMap::multiplied(const PolynomialMap& scalar) const {
    if (scalar.n_ != n_ || scalar.m_ != 1)
        throw std::invalid_argument("PolynomialMap::multiplied: need a scalar factor");
    PolynomialMap r(n_, m_);
    for (const auto& [key, c] : terms_) {
        for (const auto& [ks, cs] : scalar.terms_) {
            MultiIndex alpha(n_);
            for (int i = 0; i < n_; ++i) alpha[i] = key.second[i] + ks.second[i];
            r.add_term(key.first, alpha, c * cs);
        }
    }
    return r;
}

PolynomialMap PolynomialMap::operator+(const PolynomialMap& o) const {
    PolynomialMap r = *this;
    r += o;
    return r;
}

PolynomialMap PolynomialMap::operator-(const PolynomialMap& o) const {
    return *this + o * Complex(-1.0);
}

PolynomialMap PolynomialMap::operator*(Complex s) const {
    PolynomialMap r(n_, m_);
    if (s == Complex(0.0)) return r;
    for (const auto& [key, c] : terms_) r.terms_.emplace(key, c * s);
    return r;
}

PolynomialMap& PolynomialMap::operator+=(const PolynomialMap& o) {
    if (o.n_ != n_ || o.m_ != m_)
        throw std::invalid_argument("PolynomialMap: shape mismatch in +=");
    for (const auto& [key, c] : o.terms_) add_term(key.first, key.second, c);
    return *this;
}

std::vector<Complex> PolynomialMap::restrict_to_line(int j, const Eigen::VectorXcd& z,
                                                     const Eigen::VectorXcd& b) const {
    int deg = std::max(degree(), 0);
    std::vector<Complex> out(deg + 1, Complex(0.0));
    for (const auto& [key, c] : terms_) {
        if (key.first != j) continue;
        // Product over variables of (z_i + t b_i)^{a_i}, collected in t.
        std::vector<Complex> acc{c};
        for (int i = 0; i < n_; ++i) {
            int a = key.second[i];
            if (a == 0) continue;
            std::vector<Complex> factor(a + 1);
            for (int k = 0; k <= a; ++k) {
                Complex v = static_cast<double>(binomial(a, k));
                for (int q = 0; q < a - k; ++q) v *= z(i);
                for (int q = 0; q < k; ++q) v *= b(i);
                factor[k] = v;
            }
            std::vector<Complex> next(acc.size() + a, Complex(0.0));
            for (std::size_t p = 0; p < acc.size(); ++p)
                for (int k = 0; k <= a; ++k) next[p + k] += acc[p] * factor[k];
            acc = std::move(next);
        }
        for (std::size_t p = 0; p < acc.size() && p < out.size(); ++p) out[p] += acc[p];
    }
    return out;
}

double PolynomialMap::coeff_norm() const {
    double r = 0.0;
    for (const auto& [key, c] : terms_) r = std::max(r, std::abs(c));
    return r;
}

std::vector<PolynomialMap::Term> PolynomialMap::terms() const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& [key, c] : terms_) out.push_back(Term{key.first, key.second, c});
    return out;
}

std::string PolynomialMap::to_json() const {
    nlohmann::json j;
    j["n"] = n_;
    j["m"] = m_;
    j["terms"] = nlohmann::json::array();
    for (const auto& [key, c] : terms_) {
        nlohmann::json t;
        t["j"] = key.first;
        t["alpha"] = key.second;
        t["re"] = c.real();
        t["im"] = c.imag();
        j["terms"].push_back(t);
    }
    return j.dump();
}

PolynomialMap PolynomialMap::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    PolynomialMap p(j.at("n").get<int>(), j.at("m").get<int>());
    for (const auto& t : j.at("terms")) {
        MultiIndex alpha = t.at("alpha").get<MultiIndex>();
        p.add_term(t.at("j").get<int>(), alpha,
                   Complex(t.at("re").get<double>(), t.value("im", 0.0)));
    }
    return p;
}

}  // namespace cicurv
