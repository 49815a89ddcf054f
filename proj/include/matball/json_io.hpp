#ifndef MATBALL_JSON_IO_HPP
#define MATBALL_JSON_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "matball/bergman.hpp"
#include "matball/cmatrix.hpp"
#include "matball/contractivity.hpp"
#include "matball/domain.hpp"
#include "matball/gfunction.hpp"

namespace matball {

inline constexpr const char* kVersion = "0.1.0";

using ojson = nlohmann::ordered_json;

// Wire format: a matrix is a row-major array of rows, each entry an [re, im]
// pair; DomainSpec is {"m":..., "n":..., "mats":[...]} and VTuple mirrors it.

inline ojson to_json(const cplx& z) { return ojson::array({z.real(), z.imag()}); }

inline ojson to_json(const CMatrix& m) {
    ojson rows = ojson::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        ojson row = ojson::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ojson to_json(const std::vector<cplx>& v) {
    ojson arr = ojson::array();
    for (const cplx& z : v) arr.push_back(to_json(z));
    return arr;
}

inline cplx cplx_from_json(const ojson& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw std::invalid_argument("JSON: complex entry must be [re, im]");
    return cplx(j[0].get<double>(), j[1].get<double>());
}

inline CMatrix matrix_from_json(const ojson& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("JSON: matrix must be an array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) throw std::invalid_argument("JSON: matrix rows must be non-empty arrays");
    CMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw std::invalid_argument("JSON: ragged matrix rows");
        for (std::size_t k = 0; k < cols; ++k) m(i, k) = cplx_from_json(j[i][k]);
    }
    return m;
}

inline std::vector<cplx> cvector_from_json(const ojson& j) {
    if (!j.is_array()) throw std::invalid_argument("JSON: vector must be an array");
    std::vector<cplx> v;
    for (const auto& e : j) v.push_back(cplx_from_json(e));
    return v;
}

inline ojson to_json(const DomainSpec& d) {
    ojson j;
    j["m"] = d.m;
    j["n"] = d.n;
    ojson mats = ojson::array();
    for (const CMatrix& a : d.mats) mats.push_back(to_json(a));
    j["mats"] = std::move(mats);
    return j;
}

inline DomainSpec domain_from_json(const ojson& j) {
    if (!j.contains("m") || !j.contains("n") || !j.contains("mats"))
        throw std::invalid_argument("JSON: DomainSpec needs m, n, mats");
    std::vector<CMatrix> mats;
    for (const auto& mj : j.at("mats")) mats.push_back(matrix_from_json(mj));
    DomainSpec d = DomainSpec::make(std::move(mats));
    if (d.m != j.at("m").get<std::size_t>() || d.n != j.at("n").get<std::size_t>())
        throw std::invalid_argument("JSON: DomainSpec m/n fields disagree with mats");
    return d;
}

inline ojson to_json(const VTuple& v) {
    ojson j;
    j["m"] = v.m;
    j["p"] = v.p;
    j["q"] = v.q;
    ojson vs = ojson::array();
    for (const CMatrix& a : v.vs) vs.push_back(to_json(a));
    j["vs"] = std::move(vs);
    return j;
}

inline VTuple vtuple_from_json(const ojson& j) {
    if (!j.contains("m") || !j.contains("p") || !j.contains("q") || !j.contains("vs"))
        throw std::invalid_argument("JSON: VTuple needs m, p, q, vs");
    std::vector<CMatrix> vs;
    for (const auto& mj : j.at("vs")) vs.push_back(matrix_from_json(mj));
    VTuple v = VTuple::make(std::move(vs));
    if (v.m != j.at("m").get<std::size_t>() || v.p != j.at("p").get<std::size_t>() ||
        v.q != j.at("q").get<std::size_t>())
        throw std::invalid_argument("JSON: VTuple m/p/q fields disagree with vs");
    return v;
}

struct RunMeta {
    std::uint64_t seed = kDefaultSeed;
    double tol = 1e-8;
};

inline ojson meta_json(const RunMeta& meta) {
    ojson j;
    j["version"] = kVersion;
    j["seed"] = meta.seed;
    j["tol"] = meta.tol;
    return j;
}

inline ojson to_json(const ContractivityReport& r, const RunMeta& meta) {
    ojson j;
    j["contractive"] = r.contractive;
    j["completely_contractive_on_PA"] = r.completely_contractive_on_PA;
    j["linear_map_norm"] = r.linear_map_norm;
    j["tensor_norm"] = r.tensor_norm;
    j["witness_beta"] = to_json(r.witness_beta);
    j["attained_infimum"] = r.attained_infimum;
    j["method"] = (r.method == ReportMethod::numeric) ? "numeric" : "closed_form";
    j["optimizer_converged"] = r.optimizer_converged;
    j["meta"] = meta_json(meta);
    return j;
}

inline const char* to_string(A1Kind k) { return k == A1Kind::diag_1_d2 ? "diag_1_d2" : "diag_d1_1"; }

inline const char* to_string(A2Kind k) {
    switch (k) {
        case A2Kind::antidiag: return "antidiag";
        case A2Kind::upper_unit: return "upper_unit";
        case A2Kind::lower_unit: return "lower_unit";
    }
    return "?";
}

inline ojson to_json(const CanonicalForm2D& c, const RunMeta& meta) {
    ojson j;
    j["a1_kind"] = to_string(c.a1_kind);
    j["a2_kind"] = to_string(c.a2_kind);
    j["d"] = to_json(c.d);
    j["b"] = to_json(c.b);
    j["c"] = to_json(c.c);
    j["transform"] = to_json(c.transform);
    j["u"] = to_json(c.u);
    j["v"] = to_json(c.v);
    j["degenerate_span"] = c.degenerate_span;
    const std::array<CMatrix, 2> mats = c.canonical_mats();
    j["canonical_mats"] = ojson::array({to_json(mats[0]), to_json(mats[1])});
    j["meta"] = meta_json(meta);
    return j;
}

inline const char* to_string(SearchStatus s) {
    switch (s) {
        case SearchStatus::certificate: return "certificate";
        case SearchStatus::transpose_gap: return "transpose_gap";
        case SearchStatus::simultaneously_diagonalizable: return "simultaneously_diagonalizable";
        case SearchStatus::exhausted: return "exhausted";
    }
    return "?";
}

inline ojson to_json(const SearchResult& r, const RunMeta& meta) {
    ojson j;
    j["status"] = to_string(r.status);
    j["verdict"] = r.verdict;
    j["message"] = r.message;
    if (r.status == SearchStatus::certificate) {
        j["v0"] = to_json(r.v0);
        j["lambda0"] = r.lambda0;
        j["beta0"] = to_json(r.beta0);
        j["g_min"] = r.g_min_value;
        j["complete_test"] = r.complete_test;
        j["tensor_norm"] = r.tensor_norm_value;
        j["bset_g_values"] = r.bset_g_values;
        j["bset_separation"] = r.bset_separation;
    }
    if (r.status == SearchStatus::transpose_gap) {
        j["gap_tuple"] = to_json(r.gap_tuple);
        j["norm_plain"] = r.gap_norm_plain;
        j["norm_transposed"] = r.gap_norm_transposed;
        j["gap_on_transposed"] = r.gap_on_transposed;
    }
    if (r.status == SearchStatus::exhausted) {
        j["lambda_lo"] = r.lambda_lo;
        j["lambda_hi"] = r.lambda_hi;
        j["lambdas_tried"] = r.lambdas_tried;
    }
    j["meta"] = meta_json(meta);
    return j;
}

inline const char* to_string(KernelKind k) {
    switch (k) {
        case KernelKind::matrix_ball: return "matrix_ball";
        case KernelKind::nil2: return "nil2";
        case KernelKind::reinhardt3: return "reinhardt3";
    }
    return "?";
}

inline ojson to_json(const CurvatureResult& c, const RunMeta& meta) {
    ojson j;
    j["K"] = to_json(c.k);
    j["A0"] = to_json(c.a0);
    j["w"] = to_json(c.w);
    j["meta"] = meta_json(meta);
    return j;
}

inline ojson to_json(const ThresholdReport& r, const RunMeta& meta) {
    ojson j;
    j["example"] = to_string(r.kind);
    if (r.kind == KernelKind::matrix_ball) {
        j["r"] = r.r;
        j["s"] = r.s;
        j["nu"] = r.nu;
    }
    j["lambda"] = r.lambda;
    j["a_squared"] = r.a_squared;
    ojson rows = ojson::array();
    for (const ThresholdRow& row : r.rows) {
        ojson rj;
        rj["test"] = row.test;
        rj["holds_at_lambda"] = row.holds_at_lambda;
        rj["computed_critical_lambda"] = row.computed_critical;
        rj["paper_stated_value"] = row.paper_stated;
        rj["agree_flag"] = row.agree;
        rows.push_back(std::move(rj));
    }
    j["rows"] = std::move(rows);
    j["meta"] = meta_json(meta);
    return j;
}

}  // namespace matball

#endif  // MATBALL_JSON_IO_HPP
