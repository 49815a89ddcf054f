// matball: norms, contractivity checks, counterexample search and Bergman
// curvature thresholds for matrix-ball domains, from the command line.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "matball/bergman.hpp"
#include "matball/cmatrix.hpp"
#include "matball/contractivity.hpp"
#include "matball/domain.hpp"
#include "matball/gfunction.hpp"
#include "matball/json_io.hpp"

namespace {

using namespace matball;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNotContractive = 10;
constexpr int kExitSimDiag = 11;
constexpr int kExitExhausted = 12;

struct CommonFlags {
    std::uint64_t seed = kDefaultSeed;
    double tol = 1e-8;
    std::string format = "json";
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--seed", flags.seed, "random seed for sampled subroutines");
    cmd->add_option("--tol", flags.tol, "numeric tolerance for verdicts");
    cmd->add_option("--format", flags.format, "output format: json, csv, human")
        ->check(CLI::IsMember({"json", "csv", "human"}));
}

ojson parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    return ojson::parse(in);  // parse_error carries line/column in what()
}

ojson parse_inline(const std::string& text) { return ojson::parse(text); }

std::string human_round(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

std::string human_value(const ojson& value) {
    if (value.is_number_float()) return human_round(value.get<double>());
    if (value.is_array()) {
        std::string out = "[";
        for (std::size_t i = 0; i < value.size(); ++i) {
            if (i) out += ", ";
            out += human_value(value[i]);
        }
        return out + "]";
    }
    return value.dump();
}

void print_human(const ojson& j, const std::string& prefix = "") {
    for (const auto& [key, value] : j.items()) {
        if (value.is_object())
            print_human(value, prefix + key + ".");
        else
            std::cout << prefix << key << " = " << human_value(value) << "\n";
    }
}

void emit(const ojson& j, const CommonFlags& flags) {
    if (flags.format == "human")
        print_human(j);
    else
        std::cout << j.dump(2) << "\n";
}

RunMeta meta_of(const CommonFlags& flags) { return RunMeta{flags.seed, flags.tol}; }

int run_check(const std::string& dpath, const std::string& vpath, const CommonFlags& flags,
              bool complete_gate) {
    const DomainSpec d = domain_from_json(parse_file(dpath));
    const VTuple v = vtuple_from_json(parse_file(vpath));
    ContractivityOptions opt;
    opt.tol = flags.tol;
    const ContractivityReport rep = contractive_general(d, v, opt);
    emit(to_json(rep, meta_of(flags)), flags);
    if (complete_gate) return rep.completely_contractive_on_PA ? kExitOk : kExitNotContractive;
    return rep.contractive ? kExitOk : kExitNotContractive;
}

int run_dual_norm(const std::string& dpath, const std::string& point_text,
                  const std::string& method, const CommonFlags& flags) {
    const DomainSpec d = domain_from_json(parse_file(dpath));
    const std::vector<cplx> w = cvector_from_json(parse_inline(point_text));
    const DualNormMethod m =
        (method == "closed_x") ? DualNormMethod::closed_x : DualNormMethod::numeric;
    const double value = dual_norm(d, w, m);
    ojson j;
    j["dual_norm"] = value;
    j["method"] = method;
    j["point"] = to_json(w);
    j["meta"] = meta_json(meta_of(flags));
    emit(j, flags);
    return kExitOk;
}

int run_canonicalize(const std::string& dpath, const CommonFlags& flags) {
    const DomainSpec d = domain_from_json(parse_file(dpath));
    const CanonicalForm2D canon = canonicalize_2d(d);
    emit(to_json(canon, meta_of(flags)), flags);
    return kExitOk;
}

int run_search(const std::string& dpath, const CommonFlags& flags) {
    const DomainSpec d = domain_from_json(parse_file(dpath));
    SearchOptions opt;
    opt.seed = flags.seed;
    const SearchResult res = search(d, opt);
    emit(to_json(res, meta_of(flags)), flags);
    switch (res.status) {
        case SearchStatus::certificate:
        case SearchStatus::transpose_gap:
            return kExitOk;
        case SearchStatus::simultaneously_diagonalizable:
            return kExitSimDiag;
        case SearchStatus::exhausted:
            return kExitExhausted;
    }
    return kExitExhausted;
}

KernelSpec kernel_from_flags(const std::string& example, std::size_t r, std::size_t s,
                             double lambda) {
    if (example == "matrix_ball") return KernelSpec::matrix_ball_spec(r, s, lambda);
    if (example == "nil2") return KernelSpec::nil2_spec(lambda);
    if (example == "reinhardt3") return KernelSpec::reinhardt3_spec(lambda);
    throw std::invalid_argument("unknown example tag: " + example);
}

int run_curvature(const std::string& example, std::size_t r, std::size_t s, double lambda,
                  const std::string& point_text, const CommonFlags& flags) {
    const KernelSpec spec = kernel_from_flags(example, r, s, lambda);
    std::vector<cplx> w(spec.dim(), cplx(0.0, 0.0));
    if (!point_text.empty()) w = cvector_from_json(parse_inline(point_text));
    const CurvatureResult res = curvature(spec, w);
    ojson j = to_json(res, meta_of(flags));
    j["example"] = example;
    j["lambda"] = lambda;
    emit(j, flags);
    return kExitOk;
}

int run_jet_gram(const std::string& example, std::size_t r, std::size_t s, double lambda,
                 const std::string& point_text, const CommonFlags& flags) {
    const KernelSpec spec = kernel_from_flags(example, r, s, lambda);
    std::vector<cplx> w(spec.dim(), cplx(0.0, 0.0));
    if (!point_text.empty()) w = cvector_from_json(parse_inline(point_text));
    const CMatrix g = jet_gram(spec, w);
    const PsdVerdict verdict = schur_psd_check(g);
    ojson j;
    j["example"] = example;
    j["lambda"] = lambda;
    j["w"] = to_json(w);
    j["gram"] = to_json(g);
    j["lambda_min"] = verdict.lambda_min;
    j["positive_definite"] = verdict.lambda_min > 0.0;
    j["meta"] = meta_json(meta_of(flags));
    emit(j, flags);
    return kExitOk;
}

std::vector<double> parse_range(const std::string& text) {
    // "lo:hi:count"; a single value is a one-point range.
    std::vector<double> out;
    if (text.empty()) return out;
    double lo = 0.0, hi = 0.0;
    int count = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d", &lo, &hi, &count) == 3 && count > 0) {
        for (int k = 0; k < count; ++k)
            out.push_back(count == 1 ? lo : lo + (hi - lo) * k / static_cast<double>(count - 1));
        return out;
    }
    if (std::sscanf(text.c_str(), "%lf", &lo) == 1) {
        out.push_back(lo);
        return out;
    }
    throw std::invalid_argument("bad --lambda-range, expected lo:hi:count");
}

int run_thresholds(const std::string& example, std::size_t r, std::size_t s,
                   const std::string& range_text, const CommonFlags& flags) {
    std::vector<double> lambdas = parse_range(range_text);
    if (lambdas.empty()) lambdas = {0.2, 0.25, 5.0 / 16.0, 5.0 / 14.0, 0.5, 11.0 / 20.0, 5.0 / 9.0, 1.0};
    std::vector<ThresholdReport> reports;
    for (double lam : lambdas) reports.push_back(threshold_check(kernel_from_flags(example, r, s, lam)));

    if (flags.format == "csv") {
        std::cout << "example,test,lambda,criterion_holds,computed_critical_lambda,"
                     "paper_stated_value,agree_flag\n";
        for (const ThresholdReport& rep : reports)
            for (const ThresholdRow& row : rep.rows)
                std::printf("%s,%s,%.12g,%d,%.12g,%.12g,%d\n", to_string(rep.kind),
                            row.test.c_str(), rep.lambda, row.holds_at_lambda ? 1 : 0,
                            row.computed_critical, row.paper_stated, row.agree ? 1 : 0);
        return kExitOk;
    }
    ojson arr = ojson::array();
    for (const ThresholdReport& rep : reports) arr.push_back(to_json(rep, meta_of(flags)));
    emit(arr, flags);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"matball: operator norms, contractivity and curvature on matrix-ball domains"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string dpath, vpath, point_text, method = "numeric", example = "matrix_ball";
    std::string range_text;
    std::size_t r = 1, s = 1;
    double lambda = 1.0;

    CLI::App* check = app.add_subcommand("check", "contractivity of rho_V on Omega_A");
    check->add_option("domain", dpath, "DomainSpec JSON file")->required();
    check->add_option("tuple", vpath, "VTuple JSON file")->required();
    add_common(check, flags);

    CLI::App* check_complete =
        app.add_subcommand("check-complete", "complete contractivity surrogate ||rho_V^(n)(P_A)||");
    check_complete->add_option("domain", dpath, "DomainSpec JSON file")->required();
    check_complete->add_option("tuple", vpath, "VTuple JSON file")->required();
    add_common(check_complete, flags);

    CLI::App* dual = app.add_subcommand("dual-norm", "dual norm of a point");
    dual->add_option("domain", dpath, "DomainSpec JSON file")->required();
    dual->add_option("--point", point_text, "point as JSON [[re,im],...]")->required();
    dual->add_option("--method", method, "closed_x or numeric")
        ->check(CLI::IsMember({"closed_x", "numeric"}));
    add_common(dual, flags);

    CLI::App* canon = app.add_subcommand("canonicalize", "canonical form of a 2x2 pair");
    canon->add_option("domain", dpath, "DomainSpec JSON file")->required();
    add_common(canon, flags);

    CLI::App* sea = app.add_subcommand("search", "contractive-not-completely-contractive search");
    sea->add_option("domain", dpath, "DomainSpec JSON file")->required();
    add_common(sea, flags);

    CLI::App* curv = app.add_subcommand("bergman-curvature", "curvature and localization matrix");
    curv->add_option("--example", example, "matrix_ball, nil2 or reinhardt3")->required();
    curv->add_option("--r", r, "matrix ball rows");
    curv->add_option("--s", s, "matrix ball cols");
    curv->add_option("--lambda", lambda, "kernel exponent");
    curv->add_option("--point", point_text, "evaluation point as JSON, default 0");
    add_common(curv, flags);

    CLI::App* jet = app.add_subcommand("jet-gram", "first-order jet Gram matrix");
    jet->add_option("--example", example, "matrix_ball, nil2 or reinhardt3")->required();
    jet->add_option("--r", r, "matrix ball rows");
    jet->add_option("--s", s, "matrix ball cols");
    jet->add_option("--lambda", lambda, "kernel exponent");
    jet->add_option("--point", point_text, "evaluation point as JSON, default 0");
    add_common(jet, flags);

    CLI::App* thr = app.add_subcommand("thresholds", "contractivity threshold table");
    thr->add_option("--example", example, "matrix_ball, nil2 or reinhardt3")->required();
    thr->add_option("--r", r, "matrix ball rows");
    thr->add_option("--s", s, "matrix ball cols");
    thr->add_option("--lambda-range", range_text, "lo:hi:count (default: a built-in sample)");
    add_common(thr, flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return run_check(dpath, vpath, flags, false);
        if (check_complete->parsed()) return run_check(dpath, vpath, flags, true);
        if (dual->parsed()) return run_dual_norm(dpath, point_text, method, flags);
        if (canon->parsed()) return run_canonicalize(dpath, flags);
        if (sea->parsed()) return run_search(dpath, flags);
        if (curv->parsed()) return run_curvature(example, r, s, lambda, point_text, flags);
        if (jet->parsed()) return run_jet_gram(example, r, s, lambda, point_text, flags);
        if (thr->parsed()) return run_thresholds(example, r, s, range_text, flags);
    } catch (const nlohmann::json::parse_error& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return kExitInput;
    } catch (const std::domain_error& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return kExitInput;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
