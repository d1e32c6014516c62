#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mtsdp/errors.hpp"
#include "mtsdp/model.hpp"
#include "mtsdp/symmat.hpp"

namespace mtsdp {

/// Problem with quadratic objective, affine matrix constraint, and affine
/// equalities:
///   f(x) = x^T Q x / 2 + c^T x + c0,  G(x) = A0 + sum_i x_i A_i,  h(x) = B x - b.
/// Covers linear SDPs (Q = 0), the nearest-correlation instance, and the
/// quadratic benchmark. All derivatives are exact; in particular
/// second_contraction vanishes identically.
class QuadraticSdpOracle final : public ProblemOracle {
public:
    QuadraticSdpOracle(Eigen::MatrixXd q_form, Eigen::VectorXd c, double c0, SymMatrix a0,
                       std::vector<SymMatrix> a, Eigen::MatrixXd b_rows, Eigen::VectorXd b_rhs)
        : q_form_(std::move(q_form)),
          c_(std::move(c)),
          c0_(c0),
          a0_(std::move(a0)),
          a_(std::move(a)),
          b_rows_(std::move(b_rows)),
          b_rhs_(std::move(b_rhs)) {
        const auto nn = c_.size();
        if (q_form_.rows() != nn || q_form_.cols() != nn)
            throw DimensionMismatch("QuadraticSdpOracle: Q must be n x n");
        if (static_cast<Eigen::Index>(a_.size()) != nn)
            throw DimensionMismatch("QuadraticSdpOracle: need one A_i per variable");
        for (const SymMatrix& ai : a_) {
            if (ai.dim() != a0_.dim()) throw DimensionMismatch("QuadraticSdpOracle: A_i dim != A0 dim");
        }
        if (b_rows_.rows() != b_rhs_.size() || (b_rows_.rows() > 0 && b_rows_.cols() != nn))
            throw DimensionMismatch("QuadraticSdpOracle: B must be s x n with matching b");
    }

    static QuadraticSdpOracle linear(Eigen::VectorXd c, SymMatrix a0, std::vector<SymMatrix> a,
                                     Eigen::MatrixXd b_rows, Eigen::VectorXd b_rhs) {
        const auto nn = c.size();
        return QuadraticSdpOracle(Eigen::MatrixXd::Zero(nn, nn), std::move(c), 0.0, std::move(a0),
                                  std::move(a), std::move(b_rows), std::move(b_rhs));
    }

    int n() const override { return static_cast<int>(c_.size()); }
    int m() const override { return a0_.dim(); }
    int s() const override { return static_cast<int>(b_rhs_.size()); }

    double f(const Eigen::VectorXd& x) const override {
        return 0.5 * x.dot(q_form_ * x) + c_.dot(x) + c0_;
    }
    Eigen::VectorXd grad_f(const Eigen::VectorXd& x) const override { return q_form_ * x + c_; }
    Eigen::MatrixXd hess_f(const Eigen::VectorXd&) const override { return q_form_; }

    SymMatrix g(const Eigen::VectorXd& x) const override {
        Eigen::MatrixXd acc = a0_.mat();
        for (int i = 0; i < n(); ++i) acc += x(i) * a_[i].mat();
        return SymMatrix(acc);
    }
    SymMatrix g_i(const Eigen::VectorXd&, int i) const override { return a_[i]; }
    Eigen::MatrixXd second_contraction(const Eigen::VectorXd&, const SymMatrix&) const override {
        return Eigen::MatrixXd::Zero(n(), n());
    }

    Eigen::VectorXd h(const Eigen::VectorXd& x) const override {
        if (s() == 0) return Eigen::VectorXd(0);
        return b_rows_ * x - b_rhs_;
    }
    Eigen::MatrixXd jac_h(const Eigen::VectorXd&) const override { return b_rows_.transpose(); }
    Eigen::MatrixXd hess_h(const Eigen::VectorXd&, const Eigen::VectorXd&) const override {
        return Eigen::MatrixXd::Zero(n(), n());
    }

    bool is_linear() const { return q_form_.isZero(0.0); }

private:
    Eigen::MatrixXd q_form_;
    Eigen::VectorXd c_;
    double c0_;
    SymMatrix a0_;
    std::vector<SymMatrix> a_;
    Eigen::MatrixXd b_rows_;
    Eigen::VectorXd b_rhs_;
};

struct StartSpec {
    enum class Kind { unset, iterate, central_path };
    Kind kind = Kind::unset;
    Iterate w;          // for Kind::iterate
    double mu0 = 0.0;   // for Kind::central_path
};

/// A loaded problem instance: the oracle plus optional metadata used by the
/// driver and the report (known solution, starting rule, interior hint for
/// the central-path corrector).
struct Instance {
    std::string name;
    std::string kind;
    std::shared_ptr<ProblemOracle> oracle;
    std::optional<Iterate> known_solution;
    StartSpec start;
    std::optional<Iterate> interior_hint;
};

namespace detail {

inline Eigen::VectorXd json_vector(const nlohmann::json& j, const std::string& field,
                                   Eigen::Index expect = -1) {
    if (!j.is_array()) throw ParseError("field '" + field + "': expected an array of numbers");
    Eigen::VectorXd v(j.size());
    for (size_t k = 0; k < j.size(); ++k) {
        if (!j[k].is_number()) throw ParseError("field '" + field + "': entry " + std::to_string(k) + " is not a number");
        v(static_cast<Eigen::Index>(k)) = j[k].get<double>();
    }
    if (expect >= 0 && v.size() != expect) {
        throw ParseError("field '" + field + "': expected length " + std::to_string(expect) +
                         ", got " + std::to_string(v.size()));
    }
    return v;
}

inline Eigen::MatrixXd json_matrix(const nlohmann::json& j, const std::string& field,
                                   Eigen::Index rows = -1, Eigen::Index cols = -1) {
    if (!j.is_array()) throw ParseError("field '" + field + "': expected an array of rows");
    const Eigen::Index r = static_cast<Eigen::Index>(j.size());
    if (rows >= 0 && r != rows) {
        throw ParseError("field '" + field + "': expected " + std::to_string(rows) + " rows, got " +
                         std::to_string(r));
    }
    if (r == 0) return Eigen::MatrixXd(0, std::max<Eigen::Index>(cols, 0));
    Eigen::MatrixXd out;
    for (Eigen::Index i = 0; i < r; ++i) {
        const Eigen::VectorXd row = json_vector(j[i], field + "[" + std::to_string(i) + "]");
        if (i == 0) {
            if (cols >= 0 && row.size() != cols) {
                throw ParseError("field '" + field + "': expected " + std::to_string(cols) +
                                 " columns, got " + std::to_string(row.size()));
            }
            out.resize(r, row.size());
        } else if (row.size() != out.cols()) {
            throw ParseError("field '" + field + "': row " + std::to_string(i) +
                             " has length " + std::to_string(row.size()) + ", expected " +
                             std::to_string(out.cols()));
        }
        out.row(i) = row;
    }
    return out;
}

inline Iterate json_iterate(const nlohmann::json& j, const std::string& field, int n, int m, int s) {
    if (!j.contains("x") || !j.contains("y") || !j.contains("z")) {
        throw ParseError("field '" + field + "': iterate needs x, y, z");
    }
    Iterate w;
    w.x = json_vector(j["x"], field + ".x", n);
    w.y = SymMatrix(json_matrix(j["y"], field + ".y", m, m));
    w.z = json_vector(j["z"], field + ".z", s);
    return w;
}

inline void attach_metadata(Instance& inst, const nlohmann::json& j) {
    const int n = inst.oracle->n(), m = inst.oracle->m(), s = inst.oracle->s();
    if (j.contains("known_solution")) {
        inst.known_solution = json_iterate(j["known_solution"], "known_solution", n, m, s);
        const double res = residual_xi0(*inst.oracle, *inst.known_solution).norm;
        if (!(res <= 1e-6)) {
            throw ParseError("field 'known_solution': KKT residual " + std::to_string(res) +
                             " exceeds 1e-6");
        }
    }
    if (j.contains("interior")) {
        inst.interior_hint = json_iterate(j["interior"], "interior", n, m, s);
    }
    if (j.contains("start")) {
        const nlohmann::json& st = j["start"];
        if (st.contains("central_path_mu0")) {
            if (!st["central_path_mu0"].is_number())
                throw ParseError("field 'start.central_path_mu0': expected a number");
            inst.start.kind = StartSpec::Kind::central_path;
            inst.start.mu0 = st["central_path_mu0"].get<double>();
        } else {
            inst.start.kind = StartSpec::Kind::iterate;
            inst.start.w = json_iterate(st, "start", n, m, s);
        }
    }
}

}  // namespace detail

/// minimize ||smat(x) - T||_F^2 / 2  s.t.  smat(x) PSD, diag(smat(x)) = 1,
/// in svec coordinates (so the Euclidean objective matches the Frobenius
/// distance exactly). When the symmetrized target already is a PD matrix
/// with unit diagonal it is its own solution and gets recorded as such.
inline Instance nearest_correlation_instance(const Eigen::MatrixXd& target, std::string name) {
    const SymMatrix t(target);
    const int m = t.dim();
    const int n = svec_len(m);
    const Eigen::VectorXd a = svec(t);

    std::vector<SymMatrix> basis;
    basis.reserve(n);
    for (int k = 0; k < n; ++k) {
        Eigen::VectorXd ek = Eigen::VectorXd::Zero(n);
        ek(k) = 1.0;
        basis.push_back(smat(ek, m));
    }
    Eigen::MatrixXd b_rows = Eigen::MatrixXd::Zero(m, n);
    for (int k = 0; k < m; ++k) b_rows(k, svec_index(k, k, m)) = 1.0;

    Instance inst;
    inst.name = std::move(name);
    inst.kind = "nearest-correlation";
    inst.oracle = std::make_shared<QuadraticSdpOracle>(
        Eigen::MatrixXd::Identity(n, n), -a, 0.5 * a.squaredNorm(), SymMatrix::zero(m),
        std::move(basis), b_rows, Eigen::VectorXd::Ones(m));

    Iterate hint;
    hint.x = svec(SymMatrix::identity(m));
    hint.y = SymMatrix::identity(m);
    hint.z = Eigen::VectorXd::Zero(m);
    inst.interior_hint = hint;
    inst.start.kind = StartSpec::Kind::central_path;
    inst.start.mu0 = 1e-2;

    const bool unit_diag = (t.mat().diagonal().array() == 1.0).all();
    if (unit_diag && is_pd(t)) {
        Iterate sol;
        sol.x = a;
        sol.y = SymMatrix::zero(m);
        sol.z = Eigen::VectorXd::Zero(m);
        inst.known_solution = sol;
    }
    return inst;
}

/// Built-in registry: "lsdp-small" (linear SDP with a rank-deficient,
/// nondegenerate, strictly complementary solution chosen first and the data
/// back-solved), "near-corr-4" (nearest correlation matrix to the 4x4
/// identity), and "quad-nsdp" (strictly convex quadratic objective, linear
/// matrix constraint, one affine equality).
inline Instance builtin(const std::string& name) {
    if (name == "lsdp-small") {
        Eigen::MatrixXd a1(3, 3), a2(3, 3), a3(3, 3), a0(3, 3);
        a1 << 1, 0, 0, 0, 0, 1, 0, 1, 0;
        a2 << 0, 1, 0, 1, 1, 0, 0, 0, 1;
        a3 << 0, 0, 1, 0, 1, 0, 1, 0, 1;
        a0 << 1.5, 0.3, -0.2, 0.3, 1.1, -0.5, -0.2, -0.5, 0.1;
        Eigen::MatrixXd b_rows(1, 3);
        b_rows << 1, 0, 1;
        Eigen::VectorXd b_rhs(1), c(3);
        b_rhs << 0.7;
        c << -0.4, 1.0, 0.6;

        Instance inst;
        inst.name = name;
        inst.kind = "linear-sdp";
        inst.oracle = std::make_shared<QuadraticSdpOracle>(QuadraticSdpOracle::linear(
            c, SymMatrix(a0), {SymMatrix(a1), SymMatrix(a2), SymMatrix(a3)}, b_rows, b_rhs));

        Iterate sol;
        sol.x = Eigen::Vector3d(0.5, -0.3, 0.2);
        sol.y = SymMatrix::diagonal(Eigen::Vector3d(0.0, 0.0, 1.0));
        sol.z = Eigen::VectorXd::Constant(1, 0.4);
        inst.known_solution = sol;

        Iterate hint;
        hint.x = Eigen::Vector3d(0.5, -0.2, 0.3);
        hint.y = SymMatrix::diagonal(Eigen::Vector3d(0.1, 0.1, 1.1));
        hint.z = Eigen::VectorXd::Constant(1, 0.4);
        inst.interior_hint = hint;
        inst.start.kind = StartSpec::Kind::central_path;
        inst.start.mu0 = 1e-2;
        return inst;
    }
    if (name == "near-corr-4") {
        return nearest_correlation_instance(Eigen::MatrixXd::Identity(4, 4), name);
    }
    if (name == "quad-nsdp") {
        Eigen::MatrixXd a1(2, 2), a2(2, 2), a3(2, 2), a0(2, 2);
        a1 << 1, 0, 0, 0;
        a2 << 0, 1, 1, 0;
        a3 << 0, 0, 0, 1;
        a0 << 0.8, -0.1, -0.1, 0.4;
        Eigen::MatrixXd b_rows(1, 3);
        b_rows << 1, 1, 0;
        Eigen::VectorXd b_rhs(1), c(3);
        b_rhs << 0.3;
        c << -0.15, 0.15, 3.2;
        const Eigen::MatrixXd q = Eigen::Vector3d(2.0, 1.0, 3.0).asDiagonal();

        Instance inst;
        inst.name = name;
        inst.kind = "quad-nsdp";
        inst.oracle = std::make_shared<QuadraticSdpOracle>(
            q, c, 0.0, SymMatrix(a0), std::vector<SymMatrix>{SymMatrix(a1), SymMatrix(a2), SymMatrix(a3)},
            b_rows, b_rhs);

        Iterate sol;
        sol.x = Eigen::Vector3d(0.2, 0.1, -0.4);
        sol.y = SymMatrix::diagonal(Eigen::Vector2d(0.0, 2.0));
        sol.z = Eigen::VectorXd::Constant(1, -0.25);
        inst.known_solution = sol;

        Iterate hint;
        hint.x = Eigen::Vector3d(0.2, 0.1, 0.1);
        hint.y = SymMatrix::diagonal(Eigen::Vector2d(0.5, 2.5));
        hint.z = Eigen::VectorXd::Constant(1, -0.25);
        inst.interior_hint = hint;
        inst.start.kind = StartSpec::Kind::central_path;
        inst.start.mu0 = 1e-2;
        return inst;
    }
    throw UnknownInstance("unknown builtin instance '" + name +
                          "' (available: lsdp-small, near-corr-4, quad-nsdp)");
}

/// Load an instance from a JSON file. Kinds: "linear-sdp" (dense data),
/// "nearest-correlation" (target matrix), "builtin" (registry redirect).
inline Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open instance file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("invalid JSON in '" + path + "': " + e.what());
    }
    if (!j.contains("kind") || !j["kind"].is_string()) {
        throw ParseError("field 'kind': required string (linear-sdp|nearest-correlation|builtin)");
    }
    const std::string kind = j["kind"].get<std::string>();

    if (kind == "builtin") {
        if (!j.contains("name") || !j["name"].is_string()) {
            throw ParseError("field 'name': required for kind 'builtin'");
        }
        return builtin(j["name"].get<std::string>());
    }

    Instance inst;
    if (kind == "nearest-correlation") {
        if (!j.contains("m") || !j["m"].is_number_integer())
            throw ParseError("field 'm': required integer for nearest-correlation");
        const int m = j["m"].get<int>();
        if (m < 1) throw ParseError("field 'm': must be >= 1");
        if (!j.contains("target")) throw ParseError("field 'target': required matrix");
        inst = nearest_correlation_instance(detail::json_matrix(j["target"], "target", m, m), path);
    } else if (kind == "linear-sdp") {
        for (const char* field : {"n", "m", "s"}) {
            if (!j.contains(field) || !j[field].is_number_integer()) {
                throw ParseError(std::string("field '") + field + "': required integer");
            }
        }
        const int n = j["n"].get<int>(), m = j["m"].get<int>(), s = j["s"].get<int>();
        if (n < 1 || m < 1 || s < 0) throw ParseError("fields 'n','m','s': need n,m >= 1 and s >= 0");
        if (!j.contains("c") || !j.contains("a0") || !j.contains("a")) {
            throw ParseError("fields 'c', 'a0', 'a': required for linear-sdp");
        }
        const Eigen::VectorXd c = detail::json_vector(j["c"], "c", n);
        const SymMatrix a0(detail::json_matrix(j["a0"], "a0", m, m));
        if (!j["a"].is_array() || static_cast<int>(j["a"].size()) != n) {
            throw ParseError("field 'a': expected " + std::to_string(n) + " matrices");
        }
        std::vector<SymMatrix> a;
        a.reserve(n);
        for (int i = 0; i < n; ++i) {
            a.emplace_back(detail::json_matrix(j["a"][i], "a[" + std::to_string(i) + "]", m, m));
        }
        Eigen::MatrixXd b_rows(0, n);
        Eigen::VectorXd b_rhs(0);
        if (s > 0) {
            if (!j.contains("B") || !j.contains("b")) {
                throw ParseError("fields 'B', 'b': required when s > 0");
            }
            b_rows = detail::json_matrix(j["B"], "B", s, n);
            b_rhs = detail::json_vector(j["b"], "b", s);
        }
        inst.oracle = std::make_shared<QuadraticSdpOracle>(
            QuadraticSdpOracle::linear(c, a0, std::move(a), b_rows, b_rhs));
        inst.name = path;
        inst.kind = kind;
    } else {
        throw ParseError("field 'kind': unknown value '" + kind + "'");
    }

    detail::attach_metadata(inst, j);
    return inst;
}

}  // namespace mtsdp
