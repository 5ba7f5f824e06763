#pragma once

// Truncated formal series in epsilon with coefficients in a Grassmann algebra
// on odd generators, tensored with a polynomial algebra on even formal
// variables truncated by total degree. Houses W, W-check, Y integrands.
//
// Conventions (documented contract for the whole project):
//  - odd generators are totally ordered; monomials are stored ascending and
//    products carry the sorting parity;
//  - epsilon powers run from eps_min (-1 for the tree sector) to eps_max;
//    products that would fall below eps_min with a nonzero coefficient throw;
//  - derivatives are left derivatives w.r.t. the ascending storage order;
//  - berezin_integrate applies single-generator integrals in list order,
//    first listed acting first, so iterated and joint integration agree.

#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "csmoduli/rational.hpp"

namespace csm {

struct GrAlgebra {
    int n_odd = 0;
    int n_even = 0;
    int eps_min = -1;
    int eps_max = 2;
    int even_deg_max = 4;
    std::vector<std::string> odd_names;
    std::vector<std::string> even_names;

    static GrAlgebra make(int n_odd, int n_even, int eps_max, int even_deg_max = 4,
                          int eps_min = -1) {
        GrAlgebra g;
        g.n_odd = n_odd;
        g.n_even = n_even;
        g.eps_max = eps_max;
        g.even_deg_max = even_deg_max;
        g.eps_min = eps_min;
        for (int i = 0; i < n_odd; ++i) g.odd_names.push_back("g" + std::to_string(i));
        for (int i = 0; i < n_even; ++i) g.even_names.push_back("x" + std::to_string(i));
        return g;
    }
};

struct GrKey {
    int eps = 0;
    std::uint32_t odd = 0;      // bit i = odd generator i
    std::uint64_t even = 0;     // 8 bits per even variable exponent

    friend bool operator<(const GrKey& a, const GrKey& b) {
        if (a.eps != b.eps) return a.eps < b.eps;
        if (a.even != b.even) return a.even < b.even;
        return a.odd < b.odd;
    }
    friend bool operator==(const GrKey& a, const GrKey& b) {
        return a.eps == b.eps && a.odd == b.odd && a.even == b.even;
    }
    int odd_degree() const { return __builtin_popcount(odd); }
    int even_degree() const {
        int d = 0;
        for (int i = 0; i < 8; ++i) d += static_cast<int>((even >> (8 * i)) & 0xff);
        return d;
    }
    int parity() const { return odd_degree() & 1; }
    static int even_exp(std::uint64_t even, int var) {
        return static_cast<int>((even >> (8 * var)) & 0xff);
    }
};

// Parity of moving each bit of b past the bits of a above it (a, b disjoint).
inline int merge_sign(std::uint32_t a, std::uint32_t b) {
    int swaps = 0;
    while (b) {
        int j = __builtin_ctz(b);
        swaps += __builtin_popcount(a >> (j + 1));
        b &= b - 1;
    }
    return (swaps & 1) ? -1 : 1;
}

template <class T>
class SuperSeries {
  public:
    SuperSeries() = default;
    explicit SuperSeries(const GrAlgebra* alg) : alg_(alg) {}

    static SuperSeries scalar(const GrAlgebra* alg, const T& v) {
        SuperSeries s(alg);
        if (!scalar_traits<T>::is_zero(v)) s.terms_[GrKey{}] = v;
        return s;
    }
    static SuperSeries eps_power(const GrAlgebra* alg, int p, const T& v) {
        SuperSeries s(alg);
        GrKey k;
        k.eps = p;
        if (p > alg->eps_max) return s;
        if (p < alg->eps_min) throw std::domain_error("eps power below truncation floor");
        if (!scalar_traits<T>::is_zero(v)) s.terms_[k] = v;
        return s;
    }
    static SuperSeries odd_gen(const GrAlgebra* alg, int i, const T& v) {
        SuperSeries s(alg);
        GrKey k;
        k.odd = 1u << i;
        if (!scalar_traits<T>::is_zero(v)) s.terms_[k] = v;
        return s;
    }
    static SuperSeries even_gen(const GrAlgebra* alg, int i, const T& v) {
        SuperSeries s(alg);
        GrKey k;
        k.even = 1ull << (8 * i);
        if (!scalar_traits<T>::is_zero(v)) s.terms_[k] = v;
        return s;
    }

    const GrAlgebra* algebra() const { return alg_; }
    bool empty() const { return terms_.empty(); }
    size_t n_terms() const { return terms_.size(); }
    const std::map<GrKey, T>& terms() const { return terms_; }

    void add_term(const GrKey& k, const T& v) {
        if (k.eps > alg_->eps_max || k.even_degree() > alg_->even_deg_max) return;
        if (k.eps < alg_->eps_min) throw std::domain_error("eps power below truncation floor");
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            if (!scalar_traits<T>::is_zero(v)) terms_[k] = v;
        } else {
            it->second += v;
            if (scalar_traits<T>::is_zero(it->second)) terms_.erase(it);
        }
    }

    T coeff(const GrKey& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? scalar_traits<T>::zero() : it->second;
    }

    friend SuperSeries operator+(const SuperSeries& a, const SuperSeries& b) {
        SuperSeries r = a;
        for (const auto& [k, v] : b.terms_) r.add_term(k, v);
        return r;
    }
    friend SuperSeries operator-(const SuperSeries& a, const SuperSeries& b) {
        SuperSeries r = a;
        for (const auto& [k, v] : b.terms_) r.add_term(k, -v);
        return r;
    }
    SuperSeries operator-() const {
        SuperSeries r = *this;
        for (auto& [k, v] : r.terms_) v = -v;
        return r;
    }
    SuperSeries& operator+=(const SuperSeries& o) { return *this = *this + o; }
    SuperSeries& operator-=(const SuperSeries& o) { return *this = *this - o; }

    friend SuperSeries operator*(const T& s, const SuperSeries& a) {
        SuperSeries r(a.alg_);
        if (scalar_traits<T>::is_zero(s)) return r;
        for (const auto& [k, v] : a.terms_) r.terms_[k] = s * v;
        return r;
    }

    friend SuperSeries operator*(const SuperSeries& a, const SuperSeries& b) {
        SuperSeries r(a.alg_);
        const GrAlgebra* alg = a.alg_;
        for (const auto& [ka, va] : a.terms_)
            for (const auto& [kb, vb] : b.terms_) {
                if (ka.odd & kb.odd) continue;
                int eps = ka.eps + kb.eps;
                if (eps > alg->eps_max) continue;
                GrKey k;
                k.eps = eps;
                k.odd = ka.odd | kb.odd;
                k.even = ka.even + kb.even;  // 8-bit fields, degrees stay tiny
                if (k.even_degree() > alg->even_deg_max) continue;
                T val = va * vb;
                if (scalar_traits<T>::is_zero(val)) continue;
                if (eps < alg->eps_min)
                    throw std::domain_error("product fell below the eps truncation floor");
                if (merge_sign(ka.odd, kb.odd) < 0) val = -val;
                r.add_term(k, val);
            }
        return r;
    }
    SuperSeries& operator*=(const SuperSeries& o) { return *this = *this * o; }

    // exp of a series with no scalar (eps=0, trivial monomial) part.
    SuperSeries exp_series() const {
        GrKey unit{};
        if (terms_.count(unit))
            throw std::domain_error("exp_series: nonzero scalar part");
        SuperSeries r = scalar(alg_, scalar_traits<T>::one());
        SuperSeries pow = r;
        T fact = scalar_traits<T>::one();
        for (int n = 1; n <= 200; ++n) {
            pow = pow * (*this);
            if (pow.empty()) break;
            fact *= T(n);
            SuperSeries termn = pow;
            for (auto& [k, v] : termn.terms_) v /= fact;
            r += termn;
        }
        return r;
    }

    // Left derivative w.r.t. odd generator i.
    SuperSeries d_odd(int i) const {
        SuperSeries r(alg_);
        std::uint32_t bit = 1u << i;
        for (const auto& [k, v] : terms_) {
            if (!(k.odd & bit)) continue;
            GrKey k2 = k;
            k2.odd &= ~bit;
            int below = __builtin_popcount(k.odd & (bit - 1));
            r.add_term(k2, (below & 1) ? -v : v);
        }
        return r;
    }

    // Derivative w.r.t. even variable i.
    SuperSeries d_even(int i) const {
        SuperSeries r(alg_);
        for (const auto& [k, v] : terms_) {
            int e = GrKey::even_exp(k.even, i);
            if (e == 0) continue;
            GrKey k2 = k;
            k2.even -= 1ull << (8 * i);
            r.add_term(k2, T(e) * v);
        }
        return r;
    }

    // Berezin integral: single-generator integrals applied in list order.
    SuperSeries berezin(const std::vector<int>& gens) const {
        SuperSeries r = *this;
        for (int g : gens) r = r.d_odd(g);
        return r;
    }

    SuperSeries eps_slice(int p) const {
        SuperSeries r(alg_);
        for (const auto& [k, v] : terms_)
            if (k.eps == p) r.terms_[k] = v;
        return r;
    }
    SuperSeries eps_at_most(int p) const {
        SuperSeries r(alg_);
        for (const auto& [k, v] : terms_)
            if (k.eps <= p) r.terms_[k] = v;
        return r;
    }
    // Multiply by eps^p (terms pushed past eps_max are truncated away).
    SuperSeries eps_shift(int p) const {
        SuperSeries r(alg_);
        for (const auto& [k, v] : terms_) {
            GrKey k2 = k;
            k2.eps += p;
            if (k2.eps > alg_->eps_max) continue;
            if (k2.eps < alg_->eps_min)
                throw std::domain_error("eps shift below truncation floor");
            r.terms_[k2] = v;
        }
        return r;
    }

    // Set an odd generator to zero (drop all terms containing it).
    SuperSeries without_odd(int i) const {
        SuperSeries r(alg_);
        std::uint32_t bit = 1u << i;
        for (const auto& [k, v] : terms_)
            if (!(k.odd & bit)) r.terms_[k] = v;
        return r;
    }
    // Set all even variables to zero.
    SuperSeries even_constant_part() const {
        SuperSeries r(alg_);
        for (const auto& [k, v] : terms_)
            if (k.even == 0) r.terms_[k] = v;
        return r;
    }

    double max_abs() const {
        double m = 0;
        for (const auto& [k, v] : terms_) {
            double x = std::fabs(scalar_traits<T>::to_double(v));
            if (x > m) m = x;
        }
        return m;
    }

    // Canonical text serialization: one "(eps, odd monomial, even monomial,
    // coefficient)" line per term in key order.
    std::string serialize() const {
        std::ostringstream os;
        for (const auto& [k, v] : terms_) {
            os << "eps^" << k.eps << " ";
            if (k.odd == 0)
                os << "1";
            else
                for (int i = 0; i < alg_->n_odd; ++i)
                    if (k.odd & (1u << i)) os << alg_->odd_names[i] << ".";
            os << " ";
            if (k.even == 0)
                os << "1";
            else
                for (int i = 0; i < alg_->n_even; ++i) {
                    int e = GrKey::even_exp(k.even, i);
                    if (e) os << alg_->even_names[i] << "^" << e << ".";
                }
            os << " ";
            if constexpr (scalar_traits<T>::exact) {
                os << v.to_string();
            } else {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g", v);
                os << buf;
            }
            os << "\n";
        }
        return os.str();
    }

  private:
    const GrAlgebra* alg_ = nullptr;
    std::map<GrKey, T> terms_;
};

}  // namespace csm
