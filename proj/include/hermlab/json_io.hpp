#pragma once

#include "hermlab/density_poly.hpp"
#include "hermlab/whittaker.hpp"

#include <json.hpp>

namespace hermlab {

using nlohmann::json;

inline Rational rational_from_json(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return rational_from_string(j.get<std::string>());
    throw std::invalid_argument("expected integer or \"num/den\" string");
}

inline FieldElement element_from_json(const LocalQuadExt& ext, const json& j) {
    if (j.is_array()) {
        if (j.size() != 2) throw std::invalid_argument("entry pair must have two components");
        return FieldElement(rational_from_json(j[0]), rational_from_json(j[1]));
    }
    return FieldElement::from_rational(ext, rational_from_json(j));
}

inline Splitting splitting_from_string(const std::string& s) {
    if (s == "inert") return Splitting::inert;
    if (s == "split") return Splitting::split;
    if (s == "ramified") return Splitting::ramified;
    throw std::invalid_argument("splitting must be inert|split|ramified");
}

// {"p":3,"splitting":"inert","entries":[[["1","0"],...],...]}; "delta" picks
// the ramified model, entries may be scalars (rational strings or integers)
// or [a,b] pairs in the model basis.
inline GramMatrix gram_from_json(const json& j, std::optional<LocalQuadExt> default_ext = std::nullopt) {
    LocalQuadExt ext;
    json entries;
    if (j.is_array()) {
        if (!default_ext) throw std::invalid_argument("bare matrix needs --p/--splitting context");
        ext = *default_ext;
        entries = j;
    } else {
        long long p = j.at("p").get<long long>();
        Splitting s = splitting_from_string(j.at("splitting").get<std::string>());
        if (j.contains("delta")) {
            Discriminant d(j["delta"].get<long long>());
            ext = classify_prime(d, p);
            if (ext.splitting != s) throw std::invalid_argument("splitting does not match delta at p");
        } else {
            ext = make_local(p, s);
        }
        entries = j.at("entries");
    }
    int n = static_cast<int>(entries.size());
    std::vector<FieldElement> e;
    e.reserve(static_cast<size_t>(n) * n);
    for (const auto& row : entries) {
        if (static_cast<int>(row.size()) != n) throw std::invalid_argument("matrix must be square");
        for (const auto& v : row) e.push_back(element_from_json(ext, v));
    }
    return GramMatrix::from_entries(ext, n, e);
}

inline json gram_to_json(const GramMatrix& g) {
    json out;
    out["p"] = g.ext().p;
    out["splitting"] = to_string(g.ext().splitting);
    json rows = json::array();
    for (int i = 0; i < g.rank(); ++i) {
        json row = json::array();
        for (int j2 = 0; j2 < g.rank(); ++j2)
            row.push_back(json::array({to_string(g.at(i, j2).a), to_string(g.at(i, j2).b)}));
        rows.push_back(row);
    }
    out["entries"] = rows;
    return out;
}

inline json poly_to_json(const DensityPolynomial& p) {
    json arr = json::array();
    for (const auto& c : p.coeffs) arr.push_back(to_string(c));
    return arr;
}

inline json loglinear_to_json(const LogLinear& l) {
    json out;
    out["constant"] = to_string(l.constant);
    json terms = json::object();
    for (const auto& [p, c] : l.terms) terms[std::to_string(p)] = to_string(c);
    out["terms"] = terms;
    return out;
}

inline json whittaker_to_json(const NormalizedWhittaker& w) {
    json out;
    out["numerator"] = poly_to_json(w.numerator);
    out["kind"] = w.denominator_kind == DenomKind::self_dual_target ? "self_dual_target"
                                                                    : "almost_self_dual_scalar";
    if (w.denominator_kind == DenomKind::self_dual_target) out["denominator"] = poly_to_json(w.denom_poly);
    else out["denominator"] = to_string(w.denom_scalar);
    out["n"] = w.n;
    out["m"] = w.m;
    out["ell"] = w.ell;
    return out;
}

}  // namespace hermlab
