#include "oadl/serialize.hpp"

#include <cstdint>

namespace oadl {

json matrix_to_json(const ComplexMatrix& m) {
    json entries = json::array();
    for (const Complex& z : m.entries()) entries.push_back({z.real(), z.imag()});
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const json& j) {
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    const json& entries = j.at("entries");
    if (!entries.is_array() ||
        entries.size() != static_cast<size_t>(rows) * static_cast<size_t>(cols))
        throw std::invalid_argument("matrix_from_json: entries length != rows*cols");
    std::vector<Complex> data;
    data.reserve(entries.size());
    for (const json& e : entries) data.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    ComplexMatrix m(rows, cols, std::move(data));
    if (!m.all_finite()) throw std::invalid_argument("matrix_from_json: non-finite entry");
    return m;
}

json subspace_to_json(const StarSubspace& s) {
    json basis = json::array();
    for (const ComplexMatrix& b : s.basis) basis.push_back(matrix_to_json(b));
    return json{{"ambient_dim", s.ambient_dim},
                {"basis", std::move(basis)},
                {"is_algebra", s.is_algebra},
                {"is_unital", s.is_unital}};
}

StarSubspace subspace_from_json(const json& j) {
    StarSubspace s;
    s.ambient_dim = j.at("ambient_dim").get<int>();
    if (s.ambient_dim <= 0) throw std::invalid_argument("subspace_from_json: bad dimension");
    for (const json& b : j.at("basis")) {
        ComplexMatrix m = matrix_from_json(b);
        if (m.rows() != s.ambient_dim || m.cols() != s.ambient_dim)
            throw std::invalid_argument("subspace_from_json: basis shape mismatch");
        s.basis.push_back(std::move(m));
    }
    s.is_algebra = j.at("is_algebra").get<bool>();
    s.is_unital = j.at("is_unital").get<bool>();

    for (int i = 0; i < s.dim(); ++i) {
        for (int jx = 0; jx < s.dim(); ++jx) {
            const Complex g = hs_inner(s.basis[i], s.basis[jx]);
            const Complex want = i == jx ? Complex(1.0) : Complex(0.0);
            if (std::abs(g - want) > 1e-10)
                throw std::invalid_argument("subspace_from_json: basis is not orthonormal");
        }
        if (s.residual_norm(s.basis[i].adjoint()) > 1e-9)
            throw std::invalid_argument("subspace_from_json: basis is not *-closed");
    }
    if (s.is_unital && s.residual_norm(ComplexMatrix::identity(s.ambient_dim)) > 1e-9)
        throw std::invalid_argument("subspace_from_json: unit flag set but 1 not in span");
    if (s.is_algebra)
        for (const auto& a : s.basis)
            for (const auto& b : s.basis)
                if (s.residual_norm(a * b) > 1e-9)
                    throw std::invalid_argument(
                        "subspace_from_json: algebra flag set but span not closed");
    return s;
}

json bracket_to_json(const DistanceBracket& b) {
    json j{{"lb", b.lb},
           {"ub", b.ub},
           {"status", b.certified() ? "certified" : "heuristic"}};
    if (b.witness) j["witness"] = matrix_to_json(*b.witness);
    if (b.certificate) {
        json cert{{"phi", matrix_to_json(*b.certificate)}};
        if (b.certificate_support != 0.0) cert["support_ub"] = b.certificate_support;
        j["certificate"] = std::move(cert);
    }
    return j;
}

DistanceBracket bracket_from_json(const json& j) {
    DistanceBracket b;
    b.lb = j.at("lb").get<double>();
    b.ub = j.at("ub").get<double>();
    b.status = j.at("status").get<std::string>() == "certified"
                   ? DistanceBracket::Status::certified
                   : DistanceBracket::Status::heuristic;
    if (j.contains("witness")) b.witness = matrix_from_json(j.at("witness"));
    if (j.contains("certificate")) {
        b.certificate = matrix_from_json(j.at("certificate").at("phi"));
        if (j.at("certificate").contains("support_ub"))
            b.certificate_support = j.at("certificate").at("support_ub").get<double>();
    }
    return b;
}

json factor_spec_to_json(const FactorSpec& f) {
    return json{{"kind", f.is_matrix() ? "matrix-algebra" : "commutative-sup"},
                {"size", f.size}};
}

FactorSpec factor_spec_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const int size = j.at("size").get<int>();
    if (size < 1) throw std::invalid_argument("factor_spec_from_json: size must be >= 1");
    if (kind == "matrix-algebra") return FactorSpec::matrix(size);
    if (kind == "commutative-sup") return FactorSpec::commutative(size);
    throw std::invalid_argument("factor_spec_from_json: unknown kind " + kind);
}

json tensor_to_json(const TensorElement& u) {
    json terms = json::array();
    for (const auto& t : u.terms)
        terms.push_back(json{{"left", matrix_to_json(t.left)},
                             {"right", matrix_to_json(t.right)}});
    return json{{"left_spec", factor_spec_to_json(u.left_spec)},
                {"right_spec", factor_spec_to_json(u.right_spec)},
                {"terms", std::move(terms)}};
}

TensorElement tensor_from_json(const json& j) {
    TensorElement u{factor_spec_from_json(j.at("left_spec")),
                    factor_spec_from_json(j.at("right_spec")),
                    {}};
    for (const json& t : j.at("terms"))
        u.terms.push_back({matrix_from_json(t.at("left")), matrix_from_json(t.at("right"))});
    u.validate();
    return u;
}

json twisted_system_to_json(const TwistedSystem& sys) {
    json alpha = json::array();
    for (const ComplexMatrix& u : sys.alpha_units) alpha.push_back(matrix_to_json(u));
    json cocycle = json::array();
    for (const auto& row : sys.cocycle) {
        json r = json::array();
        for (const ComplexMatrix& s : row) r.push_back(matrix_to_json(s));
        cocycle.push_back(std::move(r));
    }
    return json{{"mult_table", sys.group.mult},
                {"fiber_dim", sys.fiber_dim},
                {"alpha_units", std::move(alpha)},
                {"cocycle", std::move(cocycle)}};
}

TwistedSystem twisted_system_from_json(const json& j) {
    TwistedSystem sys;
    sys.group = validate_group(j.at("mult_table").get<std::vector<std::vector<int>>>());
    sys.fiber_dim = j.at("fiber_dim").get<int>();
    if (sys.fiber_dim < 1)
        throw std::invalid_argument("twisted_system_from_json: fiber_dim must be >= 1");
    for (const json& u : j.at("alpha_units")) sys.alpha_units.push_back(matrix_from_json(u));
    for (const json& row : j.at("cocycle")) {
        sys.cocycle.emplace_back();
        for (const json& s : row) sys.cocycle.back().push_back(matrix_from_json(s));
    }
    sys.validate();
    return sys;
}

std::string json_digest(const json& j) {
    const std::string s = j.dump();
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace oadl
