#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "../verify/verify.hpp"
#include "sl3/asymptotics.hpp"
#include "sl3/errors.hpp"
#include "sl3/fourier.hpp"
#include "sl3/hecke.hpp"
#include "sl3/model_io.hpp"
#include "sl3/whittaker.hpp"

namespace sl3::cli {

namespace {

using json = nlohmann::ordered_json;

std::string dec(const Real& r) { return r.str(0); }

std::string dbl(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json cjson(const Complex& z) { return json::array({dec(z.re), dec(z.im)}); }

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DomainError("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n"), e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

// "a,b,...;a,b,..." or "@file" with one point per line; '#' starts a comment
std::vector<std::vector<std::string>> parse_points(const std::string& spec, size_t width, const char* what) {
    std::vector<std::string> rows;
    if (!spec.empty() && spec[0] == '@') {
        std::istringstream in(read_file(spec.substr(1)));
        for (std::string line; std::getline(in, line);) rows.push_back(line.substr(0, line.find('#')));
    } else {
        rows = split(spec, ';');
    }
    std::vector<std::vector<std::string>> out;
    for (const auto& r : rows) {
        if (trim(r).empty()) continue;
        auto f = split(r, ',');
        if (f.size() != width)
            throw DomainError(std::string(what) + ": expected " + std::to_string(width) + " comma-separated values in \"" +
                              trim(r) + "\"");
        for (auto& x : f) x = trim(x);
        out.push_back(f);
    }
    if (out.empty()) throw DomainError(std::string(what) + ": no points given");
    return out;
}

Real num(const std::string& s, prec_t p, const char* what) {
    try {
        return Real::parse(s, p);
    } catch (const std::exception&) {
        throw DomainError(std::string(what) + ": not a number: \"" + s + "\"");
    }
}

GroupPoint group_point(const std::vector<std::string>& f, prec_t p) {
    return GroupPoint{num(f[0], p, "x"), num(f[1], p, "y"), num(f[2], p, "z"),
                      TorusPoint(num(f[3], p, "y1"), num(f[4], p, "y2"))};
}

json lambda_json(const SatakeParameter& lam) {
    json a = json::array();
    for (int i = 0; i < 3; ++i) a.push_back(cjson(lam[i]));
    return a;
}

json header(const char* command, const PrecisionContext& ctx) {
    json j;
    j["schema"] = "1";
    j["command"] = command;
    j["bits"] = ctx.bits;
    return j;
}

Schedule read_schedule(const std::string& path, const char* what) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw DomainError(std::string(what) + ": invalid JSON: " + e.what());
    }
    if (!j.is_object()) throw DomainError(std::string(what) + ": top level must be an object");
    Schedule s;
    auto rat = [&](const json& v) {
        std::string t = v.is_string() ? v.get<std::string>() : v.is_number_integer() ? v.dump() : "";
        try {
            mpq_class q(t);
            q.canonicalize();
            return q;
        } catch (const std::exception&) {
            throw DomainError(std::string(what) + ": not an exact rational: " + v.dump());
        }
    };
    for (const auto& [key, val] : j.items()) {
        if (key == "schema") continue;
        if (key == "entries") {
            if (!val.is_array()) throw DomainError(std::string(what) + ": \"entries\" must be an array");
            for (const auto& r : val) {
                if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || r[0].get<long>() < 1)
                    throw DomainError(std::string(what) + ": entries are [index >= 1, \"p/q\"]");
                mpq_class q = rat(r[1]);
                if (q != 0) s.entries[r[0].get<long>()] = q;
            }
        } else if (key == "expansion") {
            if (!val.is_string()) throw DomainError(std::string(what) + ": \"expansion\" must be a string");
            QExpansion f = QExpansion::parse(val.get<std::string>());
            for (const auto& [e, c] : f.terms()) {
                if (e >= 0) throw DomainError(std::string(what) + ": \"expansion\" may only hold negative powers of q");
                s.entries[-e] = c;
            }
        } else if (key == "complete") {
            if (!val.is_boolean()) throw DomainError(std::string(what) + ": \"complete\" must be true or false");
            s.complete = val.get<bool>();
        } else if (key == "known_up_to") {
            if (!val.is_number_integer() || val.get<long>() < 0)
                throw DomainError(std::string(what) + ": \"known_up_to\" must be a nonnegative integer");
            s.known_up_to = val.get<long>();
        } else {
            throw DomainError(std::string(what) + ": unknown field \"" + key + "\"");
        }
    }
    if (!j.contains("known_up_to")) s.known_up_to = s.support_max();
    return s;
}

struct Common {
    long bits = 0;  // 0: SL3_PRECISION_BITS or 128
    std::string output;

    PrecisionContext ctx() const {
        PrecisionContext c = bits ? PrecisionContext::with_bits(bits) : PrecisionContext::from_env();
        c.validate();
        return c;
    }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"sl3: Whittaker functions, Fourier synthesis and Hecke operators for SL(3,Z)"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--bits", common.bits, "working precision in bits (default: $SL3_PRECISION_BITS, else 128)")
        ->check(CLI::Range(16L, 1L << 20));
    app.add_option("--output,-o", common.output, "write the result to this file instead of standard output");

    // every subcommand fills `result`; `status` carries a verification verdict
    std::string result;
    int status = 0;
    std::function<void()> action;

    // eval-whittaker
    auto* ew = app.add_subcommand("eval-whittaker", "evaluate one Whittaker kernel at a torus point (JSON)");
    std::string which, lam_s, y1_s, y2_s, route = "closed-form";
    ew->add_option("--which", which, "W-vt, W-weylsum, M, W-degen-a1, W-degen-a2, M-degen-a1, M-degen-a2")
        ->required()
        ->check(CLI::IsMember({"W-vt", "W-weylsum", "M", "W-degen-a1", "W-degen-a2", "M-degen-a1", "M-degen-a2"}));
    ew->add_option("--lambda", lam_s, "l1,l2,l3 with complex literals like 0.3+0.2i; l3 may be auto")->required();
    ew->add_option("--y1", y1_s, "torus coordinate y1 > 0")->required();
    ew->add_option("--y2", y2_s, "torus coordinate y2 > 0")->required();
    ew->add_option("--route", route, "degenerate W route: combination or closed-form")
        ->check(CLI::IsMember({"combination", "closed-form"}));
    ew->callback([&] {
        action = [&] {
            auto ctx = common.ctx();
            auto lam = SatakeParameter::parse(lam_s, ctx.prec());
            TorusPoint p(num(y1_s, ctx.prec(), "y1"), num(y2_s, ctx.prec(), "y2"));
            DegenRoute r = route == "combination" ? DegenRoute::combination : DegenRoute::closed_form;
            EvalInfo info;
            bool has_info = true;
            Complex v;
            if (which == "W-vt")
                v = w_vt(lam, p, ctx, &info);
            else if (which == "W-weylsum")
                v = w_weylsum(lam, p, ctx, &info);
            else if (which == "M")
                v = m_whittaker(lam, p, ctx, &info);
            else if (which == "W-degen-a1")
                v = w_degen_a1(lam, p, r, ctx, &info);
            else if (which == "W-degen-a2")
                v = w_degen_a2(lam, p, r, ctx, &info);
            else {
                has_info = false;
                v = which == "M-degen-a1" ? m_degen_a1(lam, p, ctx) : m_degen_a2(lam, p, ctx);
            }
            json j = header("eval-whittaker", ctx);
            j["which"] = which;
            if (which.rfind("W-degen", 0) == 0) j["route"] = route;
            j["lambda"] = lambda_json(lam);
            j["y1"] = dec(p.y1);
            j["y2"] = dec(p.y2);
            j["re"] = dec(v.re);
            j["im"] = dec(v.im);
            if (has_info) {
                j["est_error_bits"] = dbl(info.est_error_bits);
                j["working_bits"] = info.working_bits;
                j["lost_bits"] = dbl(info.lost_bits);
                j["terms"] = info.terms;
            }
            result = j.dump(2) + "\n";
        };
    });

    // nilpotent
    auto* nil = app.add_subcommand("nilpotent", "the six solutions of the nilpotency system (JSON)");
    std::string ny1 = "1", ny2 = "1";
    nil->add_option("--y1", ny1, "y1 > 0")->required();
    nil->add_option("--y2", ny2, "y2 > 0")->required();
    nil->callback([&] {
        action = [&] {
            auto ctx = common.ctx();
            Real a = num(ny1, ctx.prec(), "y1"), b = num(ny2, ctx.prec(), "y2");
            auto sols = nilpotent_triples(a, b, ctx.prec());
            json j = header("nilpotent", ctx);
            j["y1"] = dec(a);
            j["y2"] = dec(b);
            j["solutions"] = json::array();
            for (const auto& s : sols) {
                j["solutions"].push_back({{"label", s.label},
                                          {"p1", cjson(s.p1)},
                                          {"p2", cjson(s.p2)},
                                          {"p3", cjson(s.p3)},
                                          {"p3_minus_p1", cjson(s.diff())},
                                          {"residuals", {dbl(s.res_trace), dbl(s.res_minors), dbl(s.res_det)}}});
            }
            result = j.dump(2) + "\n";
        };
    });

    // envelope
    auto* env = app.add_subcommand("envelope", "decay rate and polynomial-exponential envelopes of W (JSON)");
    std::string env_lam = "0.4,0.1,auto",
                env_grid = "3,3;3.5,3.5;4,4;4.5,4.5;5,5;5.5,5.5;6,6;1,3;1,6;2,1;2,3;2,6;4,1;4,3;4,6";
    env->add_option("--lambda", env_lam, "Satake parameter")->capture_default_str();
    env->add_option("--grid", env_grid, "torus points y1,y2;... in [1,6]^2 or @file; diagonal points fit the rate")
        ->capture_default_str();
    env->callback([&] {
        action = [&] {
            auto ctx = common.ctx();
            auto lam = SatakeParameter::parse(env_lam, ctx.prec());
            std::vector<std::pair<double, double>> grid;
            for (const auto& f : parse_points(env_grid, 2, "--grid"))
                grid.push_back({num(f[0], 53, "y1").to_double(), num(f[1], 53, "y2").to_double()});
            auto r = envelope_check(lam, grid, ctx);
            json j = header("envelope", ctx);
            j["lambda"] = lambda_json(lam);
            j["rows"] = json::array();
            for (const auto& row : r.rows) j["rows"].push_back({dbl(row.y1), dbl(row.y2), dbl(row.log_w)});
            j["rate"] = dbl(r.rate);
            j["predicted_rate"] = dbl(r.predicted_rate);
            j["corridor"] = {dbl(r.corridor_lo), dbl(r.corridor_hi)};
            j["rate_in_corridor"] = r.rate_in_corridor;
            j["rate_near_prediction"] = r.rate_near_prediction;
            j["upper"] = {{"N", r.n_upper}, {"log_C", dbl(r.log_c_upper)}, {"min_margin", dbl(r.min_upper_margin)},
                          {"ok", r.upper_ok}};
            j["lower"] = {{"N", r.n_lower}, {"log_C", dbl(r.log_c_lower)}, {"min_margin", dbl(r.min_lower_margin)},
                          {"ok", r.lower_ok}};
            j["ok"] = r.ok();
            result = j.dump(2) + "\n";
        };
    });

    // fourier-synth
    auto* fs = app.add_subcommand("fourier-synth", "synthesize F from a coefficient model on a grid (CSV: "
                                                   "x,y,z,y1,y2,re,im,tail_bound)");
    std::string model_path, fs_grid, fs_format = "csv";
    unsigned fs_threads = 1;
    fs->add_option("--model", model_path, "coefficient model JSON (docs/formats.md)")->required();
    fs->add_option("--grid", fs_grid, "points x,y,z,y1,y2;... or @file with one point per line")->required();
    fs->add_option("--format", fs_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    fs->add_option("--threads", fs_threads, "worker threads; output is identical for any count")
        ->check(CLI::Range(1u, 256u));
    fs->callback([&] {
        action = [&] {
            auto ctx = common.ctx();
            auto model = model_from_json(read_file(model_path), ctx.prec());
            auto rows = parse_points(fs_grid, 5, "--grid");
            std::vector<GroupPoint> pts;
            for (const auto& f : rows) pts.push_back(group_point(f, ctx.prec()));
            std::vector<SynthResult> res(pts.size());
            std::vector<std::exception_ptr> errs(pts.size());
            auto work = [&](size_t first) {
                for (size_t i = first; i < pts.size(); i += fs_threads) {
                    try {
                        res[i] = synthesize(model, pts[i], ctx);
                    } catch (...) {
                        errs[i] = std::current_exception();
                    }
                }
            };
            std::vector<std::thread> pool;
            for (unsigned t = 1; t < fs_threads; ++t) pool.emplace_back(work, t);
            work(0);
            for (auto& t : pool) t.join();
            for (auto& e : errs)
                if (e) std::rethrow_exception(e);
            if (fs_format == "csv") {
                std::string s = "x,y,z,y1,y2,re,im,tail_bound\n";
                for (size_t i = 0; i < pts.size(); ++i) {
                    const auto& g = pts[i];
                    s += dec(g.x) + "," + dec(g.y) + "," + dec(g.z) + "," + dec(g.a.y1) + "," + dec(g.a.y2) + "," +
                         dec(res[i].value.re) + "," + dec(res[i].value.im) + "," + dbl(res[i].tail_bound) + "\n";
                }
                result = s;
            } else {
                json j = header("fourier-synth", ctx);
                j["points"] = json::array();
                for (size_t i = 0; i < pts.size(); ++i) {
                    const auto& g = pts[i];
                    j["points"].push_back({{"x", dec(g.x)},
                                           {"y", dec(g.y)},
                                           {"z", dec(g.z)},
                                           {"y1", dec(g.a.y1)},
                                           {"y2", dec(g.a.y2)},
                                           {"value", cjson(res[i].value)},
                                           {"tail_bound", dbl(res[i].tail_bound)},
                                           {"terms", res[i].terms}});
                }
                result = j.dump(2) + "\n";
            }
        };
    });

    // project
    auto* pr = app.add_subcommand("project", "Fourier projection of a synthesized model (JSON)");
    std::string pr_model, pr_kind = "k0l", pr_point = "0,0,0,1,1";
    long pr_k = 1, pr_l = 1, pr_m = 0, pr_n = 1;
    int pr_order = 64;
    bool pr_generic = false;
    pr->add_option("--model", pr_model, "coefficient model JSON")->required();
    pr->add_option("--kind", pr_kind, "k0l: against e(kx + ly) over (x,y,z); mn: against e(mz + ny) over (y,z)")
        ->check(CLI::IsMember({"k0l", "mn"}));
    pr->add_option("--k", pr_k, "k for --kind k0l");
    pr->add_option("--l", pr_l, "l for --kind k0l");
    pr->add_option("--m", pr_m, "m for --kind mn");
    pr->add_option("--n", pr_n, "n for --kind mn");
    pr->add_option("--point", pr_point, "g as x,y,z,y1,y2")->capture_default_str();
    pr->add_option("--order", pr_order, "trapezoid points per circle")->check(CLI::Range(1, 4096))->capture_default_str();
    pr->add_flag("--generic", pr_generic, "evaluate F at every quadrature node instead of the factorized sums");
    pr->callback([&] {
        action = [&] {
            auto ctx = common.ctx();
            auto model = model_from_json(read_file(pr_model), ctx.prec());
            GroupPoint g = group_point(parse_points(pr_point, 5, "--point").at(0), ctx.prec());
            KernelCache cache;
            Evaluatable F = [&](const GroupPoint& h) { return synthesize(model, h, ctx, &cache).value; };
            Complex v;
            if (pr_kind == "k0l")
                v = pr_generic ? project_k0l(F, pr_k, pr_l, g, pr_order)
                               : project_k0l(model, pr_k, pr_l, g, pr_order, ctx, &cache);
            else
                v = pr_generic ? project_mn(F, pr_m, pr_n, g, pr_order)
                               : project_mn(model, pr_m, pr_n, g, pr_order, ctx, &cache);
            json j = header("project", ctx);
            j["kind"] = pr_kind;
            if (pr_kind == "k0l") {
                j["k"] = pr_k;
                j["l"] = pr_l;
            } else {
                j["m"] = pr_m;
                j["n"] = pr_n;
            }
            j["point"] = {dec(g.x), dec(g.y), dec(g.z), dec(g.a.y1), dec(g.a.y2)};
            j["order"] = pr_order;
            j["generic"] = pr_generic;
            j["value"] = cjson(v);
            result = j.dump(2) + "\n";
        };
    });

    // majorants
    auto* mj = app.add_subcommand("majorants", "truncated majorant sums S1, S2, S3 with their envelopes (JSON)");
    double mj_x = 0, mj_y1 = 1, mj_y2 = 1, mj_delta = 0;
    long mj_kmax = 0;
    mj->add_option("--x", mj_x, "|x| <= 1/2")->check(CLI::Range(-0.5, 0.5))->capture_default_str();
    mj->add_option("--y1", mj_y1, "y1 >= sqrt(3)/2")->capture_default_str();
    mj->add_option("--y2", mj_y2, "y2 >= sqrt(3)/2")->capture_default_str();
    mj->add_option("--coset-delta", mj_delta, "coset cutoff |cz + d| for S1 and S3 (0: automatic)")
        ->check(CLI::NonNegativeNumber);
    mj->add_option("--s2-kmax", mj_kmax, "k range of S2 (0: automatic)")->check(CLI::NonNegativeNumber);
    mj->callback([&] {
        action = [&] {
            auto r = majorant_sums(mj_x, mj_y1, mj_y2, {mj_delta, mj_kmax});
            json j;
            j["schema"] = "1";
            j["command"] = "majorants";
            j["x"] = dbl(r.x);
            j["y1"] = dbl(r.y1);
            j["y2"] = dbl(r.y2);
            j["coset_delta"] = dbl(r.coset_delta);
            j["s2_kmax"] = r.s2_kmax;
            j["cosets"] = r.cosets;
            j["S1"] = {{"value", dbl(r.S1)},
                       {"last_tenth", dbl(r.S1_last)},
                       {"envelope_cosets", dbl(r.S1_env_cosets)},
                       {"envelope_lattice", dbl(r.S1_env_lattice)},
                       {"ok", r.s1_ok}};
            j["S2"] = {{"value", dbl(r.S2)},
                       {"last_tenth", dbl(r.S2_last)},
                       {"envelope_count", dbl(r.S2_env_count)},
                       {"envelope_closed", dbl(r.S2_env_closed)},
                       {"ok", r.s2_ok}};
            j["S3"] = {{"value", dbl(r.S3)},
                       {"last_tenth", dbl(r.S3_last)},
                       {"envelope", dbl(r.S3_env)},
                       {"exponent_excess", dbl(r.S3_exponent_excess)},
                       {"exponent_samples", r.S3_exponent_samples},
                       {"ok", r.s3_ok}};
            j["ok"] = r.ok();
            result = j.dump(2) + "\n";
        };
    });

    // hecke
    auto* hk = app.add_subcommand("hecke", "apply H_n to a q-expansion");
    long hk_n = 1;
    std::string hk_input, hk_format = "text";
    hk->add_option("--n", hk_n, "n >= 1")->required()->check(CLI::PositiveNumber);
    hk->add_option("--input", hk_input, "q-expansion such as \"q^-2\" or \"3q^-1 + 1/2 q^2\"")->required();
    hk->add_option("--format", hk_format, "text or json")->check(CLI::IsMember({"text", "json"}));
    hk->callback([&] {
        action = [&] {
            QExpansion f = QExpansion::parse(hk_input);
            QExpansion h = hecke_apply(hk_n, f);
            if (hk_format == "text") {
                result = h.str() + "\n";
                return;
            }
            json j;
            j["schema"] = "1";
            j["command"] = "hecke";
            j["n"] = hk_n;
            j["input"] = f.str();
            j["output"] = h.str();
            j["terms"] = json::array();
            for (const auto& [e, c] : h.terms()) j["terms"].push_back({e, c.get_str()});
            result = j.dump(2) + "\n";
        };
    });

    // hecke-combo
    auto* hc = app.add_subcommand("hecke-combo", "coefficients f_k of sum_n c_n H_n applied to a polar part (JSON)");
    std::string hc_cn, hc_polar;
    long hc_kmax = 0;
    hc->add_option("--cn", hc_cn, "schedule JSON for c_n")->required();
    hc->add_option("--polar", hc_polar, "schedule JSON for e_m")->required();
    hc->add_option("--kmax", hc_kmax, "largest k")->required()->check(CLI::PositiveNumber);
    hc->callback([&] {
        action = [&] {
            Schedule c = read_schedule(hc_cn, "--cn"), e = read_schedule(hc_polar, "--polar");
            auto f = hecke_combo(c, e, hc_kmax);
            json j;
            j["schema"] = "1";
            j["command"] = "hecke-combo";
            j["k_max"] = hc_kmax;
            j["f"] = json::array();
            for (const auto& [k, v] : f) j["f"].push_back({k, v.get_str()});
            result = j.dump(2) + "\n";
        };
    });

    // verify
    auto* vf = app.add_subcommand("verify", "run acceptance checks; exit 0 iff all pass");
    std::string suite = "all";
    vf->add_option("--suite", suite, "bessel, whittaker, asymptotics, fourier, hecke, core or all")
        ->check(CLI::IsMember(verify::suite_names()))
        ->capture_default_str();
    vf->callback([&] {
        action = [&] {
            std::ostringstream lines;
            bool ok = true;
            for (const auto& r : verify::run_suite(suite)) {
                lines << verify::format_line(r) << "\n";
                ok = ok && r.pass;
            }
            result = lines.str();
            status = ok ? 0 : 1;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "sl3: " << e.what() << "\n";
        return 2;
    }

    try {
        action();
        if (common.output.empty()) {
            out << result;
        } else {
            std::ofstream f(common.output);
            if (!f) throw DomainError("cannot write " + common.output);
            f << result;
        }
        return status;
    } catch (const DomainError& e) {
        err << "sl3: " << e.what() << "\n";
        return 2;
    } catch (const CancellationAlarm& e) {
        err << "sl3: cancellation alarm: " << e.what() << "\n";
        return 3;
    } catch (const ConvergenceError& e) {
        err << "sl3: no convergence: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "sl3: internal error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace sl3::cli
