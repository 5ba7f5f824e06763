#pragma once

// Plain structured-text fixture formats with canonical key order.
//
// Lie fixture:
//   lie
//   dim: N
//   dual_coxeter: p/q
//   killing:        (N rows of N entries)
//   f:              (sparse lines "a b c value", 0-based, closed by "end")
//
// Dgla fixture:
//   dgla
//   dims: d0 d1 d2 d3
//   d:              (sparse "i j value", end)
//   bracket:        (sparse "k i j value", end)
//   pairing:        (sparse "i j value", end)
//   metric:         (optional, sparse "i j value", end)
//
// Frobenius shorthand (expanded at load into g (x) model):
//   frobenius
//   lie: su2 | su3 | @path
//   model_dim: M
//   model_degrees: M integers
//   model_product:  (sparse "k i j value", end)
//   model_trace:    (M entries)
//   model_d:        (sparse "i j value", end)
//
// Values are rationals ("p/q" or decimals); the double loader converts.

#include <fstream>
#include <map>
#include <sstream>

#include "csmoduli/dgla.hpp"
#include "csmoduli/lie.hpp"

namespace csm {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace io_detail {

inline std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> toks;
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

template <class T>
T parse_value(const std::string& s) {
    Rational r = Rational::from_string(s);
    if constexpr (scalar_traits<T>::exact)
        return r;
    else
        return r.to_double();
}

struct Reader {
    std::vector<std::string> lines;
    size_t pos = 0;

    explicit Reader(std::istream& in) {
        std::string l;
        while (std::getline(in, l)) {
            auto h = l.find('#');
            if (h != std::string::npos) l = l.substr(0, h);
            // trim
            size_t b = l.find_first_not_of(" \t\r");
            if (b == std::string::npos) continue;
            lines.push_back(l.substr(b, l.find_last_not_of(" \t\r") - b + 1));
        }
    }
    bool done() const { return pos >= lines.size(); }
    const std::string& peek() const { return lines[pos]; }
    std::string next() { return lines[pos++]; }

    std::string expect_key(const std::string& key) {
        if (done()) throw ParseError("expected key '" + key + "', got end of file");
        auto l = next();
        if (l.rfind(key + ":", 0) != 0 && l != key)
            throw ParseError("expected key '" + key + "', got '" + l + "'");
        auto c = l.find(':');
        return c == std::string::npos ? "" : l.substr(c + 1);
    }
};

}  // namespace io_detail

template <class T>
LieAlgebraData<T> load_lie_fixture(std::istream& in) {
    io_detail::Reader r(in);
    if (r.next() != "lie") throw ParseError("lie fixture must start with 'lie'");
    int dim = std::stoi(r.expect_key("dim"));
    Rational hv = Rational::from_string(io_detail::tokenize(r.expect_key("dual_coxeter"))[0]);
    LieAlgebraData<T> L;
    L.dim = dim;
    L.dual_coxeter = hv;
    L.killing = Mat<T>(dim, dim);
    r.expect_key("killing");
    for (int i = 0; i < dim; ++i) {
        auto toks = io_detail::tokenize(r.next());
        if (static_cast<int>(toks.size()) != dim) throw ParseError("killing row size mismatch");
        for (int j = 0; j < dim; ++j) L.killing(i, j) = io_detail::parse_value<T>(toks[j]);
    }
    L.f.assign(static_cast<size_t>(dim) * dim * dim, scalar_traits<T>::zero());
    r.expect_key("f");
    while (!r.done() && r.peek() != "end") {
        auto toks = io_detail::tokenize(r.next());
        if (toks.size() != 4) throw ParseError("f line needs 'a b c value'");
        int a = std::stoi(toks[0]), b = std::stoi(toks[1]), c = std::stoi(toks[2]);
        if (a < 0 || a >= dim || b < 0 || b >= dim || c < 0 || c >= dim)
            throw ParseError("f index out of range");
        L.f_at(a, b, c) = io_detail::parse_value<T>(toks[3]);
    }
    if (r.done()) throw ParseError("missing 'end' after f block");
    r.next();
    if (validate_lie(L) > 1e-10)
        throw ParseError("lie fixture fails structural validation");
    return L;
}

namespace io_detail {

template <class T>
void read_sparse_matrix(Reader& r, Mat<T>& m) {
    while (!r.done() && r.peek() != "end") {
        auto toks = tokenize(r.next());
        if (toks.size() != 3) throw ParseError("matrix line needs 'i j value'");
        size_t i = std::stoul(toks[0]), j = std::stoul(toks[1]);
        if (i >= m.rows() || j >= m.cols()) throw ParseError("matrix index out of range");
        m(i, j) = parse_value<T>(toks[2]);
    }
    if (r.done()) throw ParseError("missing 'end' after matrix block");
    r.next();
}

}  // namespace io_detail

// General model-algebra data for the Frobenius shorthand.
template <class T>
struct ModelAlgebra {
    int dim = 0;
    std::vector<int> degree;
    std::vector<T> product;  // p(k,i,j): m_i m_j = sum_k p(k,i,j) m_k
    std::vector<T> trace;
    Mat<T> d;

    const T& p_at(int k, int i, int j) const {
        return product[(static_cast<size_t>(k) * dim + i) * dim + j];
    }
};

// Expand g (x) model into a cyclic dgla. Kernel conventions as in
// tensor_frobenius; the model must be graded-commutative with a degree-3
// trace (validated by validate_dgla downstream).
template <class T>
CyclicDgla<T> expand_frobenius(const LieAlgebraData<T>& lie, const ModelAlgebra<T>& A) {
    std::array<int, 4> dims{0, 0, 0, 0};
    for (int m = 0; m < A.dim; ++m) {
        if (A.degree[m] < 0 || A.degree[m] > 3) throw ParseError("model degree out of range");
        dims[A.degree[m]] += lie.dim;
    }
    CyclicDgla<T> L;
    L.init_dims(dims);
    // global index: models grouped by degree in file order, lie index inner
    std::vector<int> gbase(A.dim);
    {
        std::array<int, 4> cursor{0, 0, 0, 0};
        for (int m = 0; m < A.dim; ++m) {
            gbase[m] = L.offset[A.degree[m]] + cursor[A.degree[m]] * lie.dim;
            cursor[A.degree[m]]++;
        }
    }
    Mat<T> kinv = inverse(lie.killing);
    // bracket
    for (int a = 0; a < lie.dim; ++a)
        for (int b = 0; b < lie.dim; ++b) {
            std::vector<T> fab(lie.dim, scalar_traits<T>::zero());
            bool nz = false;
            for (int c = 0; c < lie.dim; ++c) {
                T s = scalar_traits<T>::zero();
                for (int dd = 0; dd < lie.dim; ++dd) s += lie.f_at(a, b, dd) * kinv(dd, c);
                fab[c] = s;
                if (!scalar_traits<T>::is_zero(s)) nz = true;
            }
            if (!nz) continue;
            for (int mi = 0; mi < A.dim; ++mi)
                for (int mj = 0; mj < A.dim; ++mj)
                    for (int mk = 0; mk < A.dim; ++mk) {
                        const T& p = A.p_at(mk, mi, mj);
                        if (scalar_traits<T>::is_zero(p)) continue;
                        for (int c = 0; c < lie.dim; ++c)
                            if (!scalar_traits<T>::is_zero(fab[c]))
                                L.b_at(gbase[mk] + c, gbase[mi] + a, gbase[mj] + b) += p * fab[c];
                    }
        }
    // pairing: kappa(a,b) trace(m_i m_j)
    for (int mi = 0; mi < A.dim; ++mi)
        for (int mj = 0; mj < A.dim; ++mj) {
            T tr = scalar_traits<T>::zero();
            for (int mk = 0; mk < A.dim; ++mk) tr += A.trace[mk] * A.p_at(mk, mi, mj);
            if (scalar_traits<T>::is_zero(tr)) continue;
            for (int a = 0; a < lie.dim; ++a)
                for (int b = 0; b < lie.dim; ++b)
                    if (!scalar_traits<T>::is_zero(lie.killing(a, b)))
                        L.pairing(gbase[mi] + a, gbase[mj] + b) += tr * lie.killing(a, b);
        }
    // differential: id (x) model d
    for (int mi = 0; mi < A.dim; ++mi)
        for (int mj = 0; mj < A.dim; ++mj) {
            const T& v = A.d(mi, mj);
            if (scalar_traits<T>::is_zero(v)) continue;
            for (int a = 0; a < lie.dim; ++a) L.d(gbase[mi] + a, gbase[mj] + a) = v;
        }
    return L;
}

template <class T>
CyclicDgla<T> load_dgla_fixture(std::istream& in, Metric<T>* metric_out = nullptr) {
    io_detail::Reader r(in);
    auto head = r.next();
    if (head == "frobenius") {
        auto lie_ref = io_detail::tokenize(r.expect_key("lie"));
        LieAlgebraData<T> lie;
        if (lie_ref.at(0) == "su2")
            lie = su2<T>();
        else if (lie_ref.at(0) == "su3")
            lie = su3<T>();
        else if (lie_ref.at(0)[0] == '@') {
            std::ifstream f(lie_ref.at(0).substr(1));
            if (!f) throw ParseError("cannot open lie fixture " + lie_ref.at(0));
            lie = load_lie_fixture<T>(f);
        } else {
            throw ParseError("unknown lie reference");
        }
        ModelAlgebra<T> A;
        A.dim = std::stoi(r.expect_key("model_dim"));
        r.expect_key("model_degrees");
        {
            auto toks = io_detail::tokenize(r.next());
            if (static_cast<int>(toks.size()) != A.dim)
                throw ParseError("model_degrees size mismatch");
            for (auto& t : toks) A.degree.push_back(std::stoi(t));
        }
        A.product.assign(static_cast<size_t>(A.dim) * A.dim * A.dim, scalar_traits<T>::zero());
        r.expect_key("model_product");
        while (!r.done() && r.peek() != "end") {
            auto toks = io_detail::tokenize(r.next());
            if (toks.size() != 4) throw ParseError("model_product line needs 'k i j value'");
            int k = std::stoi(toks[0]), i = std::stoi(toks[1]), j = std::stoi(toks[2]);
            A.product[(static_cast<size_t>(k) * A.dim + i) * A.dim + j] =
                io_detail::parse_value<T>(toks[3]);
        }
        r.next();
        r.expect_key("model_trace");
        {
            auto toks = io_detail::tokenize(r.next());
            if (static_cast<int>(toks.size()) != A.dim) throw ParseError("model_trace size");
            for (auto& t : toks) A.trace.push_back(io_detail::parse_value<T>(t));
        }
        A.d = Mat<T>(A.dim, A.dim);
        r.expect_key("model_d");
        io_detail::read_sparse_matrix(r, A.d);
        return expand_frobenius(lie, A);
    }
    if (head != "dgla") throw ParseError("dgla fixture must start with 'dgla' or 'frobenius'");
    auto dim_toks = io_detail::tokenize(r.expect_key("dims"));
    if (dim_toks.size() != 4) throw ParseError("dims needs 4 integers");
    CyclicDgla<T> L;
    L.init_dims({std::stoi(dim_toks[0]), std::stoi(dim_toks[1]), std::stoi(dim_toks[2]),
                 std::stoi(dim_toks[3])});
    r.expect_key("d");
    io_detail::read_sparse_matrix(r, L.d);
    r.expect_key("bracket");
    while (!r.done() && r.peek() != "end") {
        auto toks = io_detail::tokenize(r.next());
        if (toks.size() != 4) throw ParseError("bracket line needs 'k i j value'");
        int k = std::stoi(toks[0]), i = std::stoi(toks[1]), j = std::stoi(toks[2]);
        if (k >= L.total || i >= L.total || j >= L.total)
            throw ParseError("bracket index out of range");
        L.b_at(k, i, j) = io_detail::parse_value<T>(toks[3]);
    }
    if (r.done()) throw ParseError("missing 'end' after bracket");
    r.next();
    r.expect_key("pairing");
    io_detail::read_sparse_matrix(r, L.pairing);
    if (!r.done() && r.peek().rfind("metric", 0) == 0) {
        r.expect_key("metric");
        Mat<T> g(L.total, L.total);
        io_detail::read_sparse_matrix(r, g);
        if (metric_out) metric_out->g = g;
    } else if (metric_out) {
        metric_out->g = Mat<T>::identity(L.total);
    }
    return L;
}

// Canonical text encodings of graph lists, one per line.
inline std::string encode_graph_list(const std::vector<TrivalentGraph>& gs) {
    std::string out;
    for (const auto& g : gs) {
        out += g.encode();
        out += " aut=" + std::to_string(g.aut_order);
        out += " loops=" + std::to_string(g.loop_number);
        out += "\n";
    }
    return out;
}

}  // namespace csm
