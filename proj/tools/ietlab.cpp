#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ietlab/accel.hpp"
#include "ietlab/birkhoff.hpp"
#include "ietlab/diophantine.hpp"
#include "ietlab/errors.hpp"
#include "ietlab/io.hpp"
#include "ietlab/mixing.hpp"
#include "ietlab/ratner.hpp"
#include "ietlab/rauzy_veech.hpp"
#include "ietlab/real.hpp"
#include "ietlab/roof.hpp"
#include "ietlab/zippered.hpp"

using namespace ietlab;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

// Output and provenance of one command invocation.
struct Session {
    std::string command;
    Json config = Json::object();
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> fingerprint;
    Json results = Json::array();

    void emit(Json record) { results.push_back(std::move(record)); }

    Json provenance() const {
        Json p;
        p["record"] = "provenance";
        p["command"] = command;
        p["config"] = config;
        p["seed"] = seed ? Json(*seed) : Json(nullptr);
        p["fingerprint"] = fingerprint ? Json(hex64(*fingerprint)) : Json(nullptr);
        return p;
    }
};

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void append_log(const std::string& path, const Session& s) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw FormatError("log", "cannot open log file '" + path + "'");
    Json rec;
    rec["timestamp"] = utc_timestamp();
    rec["command"] = s.command;
    rec["config"] = s.config;
    rec["seed"] = s.seed ? Json(*s.seed) : Json(nullptr);
    rec["fingerprint"] = s.fingerprint ? Json(hex64(*s.fingerprint)) : Json(nullptr);
    rec["results"] = s.results;
    out << rec.dump() << "\n";
}

// CSV with a trailing precision column (significant digits of the numeric columns).
class Csv {
public:
    Csv(const std::string& path, std::vector<std::string> header) {
        if (path.empty()) return;
        out_.open(path);
        if (!out_) throw FormatError("csv", "cannot open CSV file '" + path + "'");
        header.push_back("precision");
        row_strings(header);
    }
    template <class... T>
    void row(const T&... v) {
        if (!out_.is_open()) return;
        std::vector<std::string> cells{cell(v)...};
        cells.push_back(std::to_string(kDigits));
        row_strings(cells);
    }

private:
    static constexpr int kDigits = 17;
    static std::string cell(double v) {
        std::ostringstream os;
        os << std::setprecision(kDigits) << v;
        return os.str();
    }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    static std::string cell(const mpz_class& v) { return v.get_str(); }
    static std::string cell(bool b) { return b ? "1" : "0"; }
    template <class I, std::enable_if_t<std::is_integral_v<I>, int> = 0>
    static std::string cell(I v) {
        return std::to_string(v);
    }
    void row_strings(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << "\n";
    }
    std::ofstream out_;
};

ExactScalar parse_scalar(const std::string& text, const std::string& field) {
    try {
        return ExactScalar::parse(text);
    } catch (const std::exception& e) {
        throw FormatError(field, "bad exact scalar for --" + field + ": " + e.what());
    }
}

mpq_class parse_rational(const std::string& text, const std::string& field) {
    const ExactScalar v = parse_scalar(text, field);
    if (!v.is_rational()) throw FormatError(field, "--" + field + " must be rational");
    return v.rational_part();
}

std::vector<long long> parse_grid(const std::string& text, const std::string& field) {
    std::vector<long long> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size() || v < 2 || v != std::floor(v)) throw std::invalid_argument(tok);
            out.push_back(static_cast<long long>(v));
        } catch (const std::exception&) {
            throw FormatError(field, "bad entry '" + tok + "' in --" + field);
        }
    }
    if (out.empty()) throw FormatError(field, "--" + field + " is empty");
    return out;
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) throw std::invalid_argument(text);
        const long a = std::stol(text.substr(0, dots)), b = std::stol(text.substr(dots + 2));
        if (a < 0 || b < a) throw std::invalid_argument(text);
        return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
    } catch (const std::exception&) {
        throw FormatError("l-range", "--l-range must look like A..B with 0 <= A <= B");
    }
}

// Acceleration with at least `levels` selected times, deepening the trace as needed.
Acceleration accelerate(const Iet& T, std::size_t levels, const mpq_class& nu, std::size_t lbar_max) {
    std::size_t steps = 3 * levels + 40;
    for (;;) {
        Acceleration acc = Acceleration::build(T, steps, nu, lbar_max);
        if (acc.count() >= levels || acc.trace().depth() < steps || steps > 200000) return acc;
        steps *= 2;
    }
}

struct Common {
    std::string iet = "golden";
    std::string roof = "golden";
    std::string nu = "3";
    std::size_t lbar_max = 8;
    std::string csv;
};

struct Params {
    std::string tau = "101/100", tau_prime = "199/200", eta = "9/10", xi = "124/125";
    std::string window = "final";

    ParamCandidate candidate() const {
        return {parse_rational(tau, "tau"), parse_rational(tau_prime, "tau-prime"), parse_rational(eta, "eta"),
                parse_rational(xi, "xi")};
    }
    ParamWindow window_kind() const {
        if (window == "final") return ParamWindow::Final;
        if (window == "standing") return ParamWindow::Standing;
        throw FormatError("window", "--window must be 'final' or 'standing'");
    }
    void echo(Json& c) const {
        c["tau"] = tau;
        c["tau_prime"] = tau_prime;
        c["eta"] = eta;
        c["xi"] = xi;
        c["window"] = window;
    }
};

void add_params(CLI::App* sub, Params& p) {
    sub->add_option("--tau", p.tau, "tau in (1, 16/15)");
    sub->add_option("--tau-prime", p.tau_prime, "tau' in (15/16, 1)");
    sub->add_option("--eta", p.eta, "eta");
    sub->add_option("--xi", p.xi, "xi");
    sub->add_option("--window", p.window, "parameter window: final or standing");
}

Json dc_base(Session& s, const Iet& T, const Common& c) {
    s.config["iet"] = iet_to_json(T);
    s.config["nu"] = c.nu;
    s.config["lbar_max"] = c.lbar_max;
    return s.config;
}

DcParams resolve_params(const Acceleration& acc, const Params& p) {
    if (!acc.times().lbar) throw DomainError("no positive window found: " + acc.times().diagnostic);
    return validate_params(p.candidate(), acc.nu(), acc.lbar(), acc.base().size(), p.window_kind());
}

std::size_t dc_levels(std::size_t depth, std::size_t L) { return depth + L + 3; }

Json report_json(const Iet& T, const RoofSpec& spec, const ExactScalar& x, long long r, const GrowthReport& g) {
    (void)T;
    (void)spec;
    Json j;
    j["record"] = "growth";
    j["x"] = x.str();
    j["r"] = r;
    j["S"] = g.S;
    j["radius"] = g.S_radius;
    j["ratio"] = g.ratio;
    j["oriented_ratio"] = g.oriented_ratio;
    j["U"] = g.U;
    j["V"] = g.V;
    j["M"] = g.M;
    j["in_band"] = g.in_band;
    j["within_bounds"] = g.within_mpd_bounds;
    return j;
}

Json witness_json(const WitnessResult& w) {
    Json j;
    j["record"] = "witness";
    j["x"] = w.x.str();
    j["y"] = w.y.str();
    j["r"] = w.r;
    j["l"] = w.l;
    j["case"] = w.case_index;
    j["direction"] = direction_name(w.direction);
    j["switched"] = w.switched;
    j["M"] = w.M;
    j["L"] = w.L;
    j["p"] = w.p;
    j["max_deviation"] = w.max_deviation;
    j["max_separation"] = w.max_separation;
    j["verified"] = w.verdict == Verdict::Verified;
    j["reverified"] = w.reverified;
    j["reverify_deviation"] = w.reverify_deviation;
    j["reason"] = w.reason;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ietlab: interval exchanges, Rauzy-Veech induction and special flows"};
    app.require_subcommand(1);
    std::string log_path = std::getenv("IETLAB_LOG") ? std::getenv("IETLAB_LOG") : "ietlab-log.jsonl";
    bool no_log = false;
    app.add_option("--log", log_path, "line-delimited experiment log (appended)");
    app.add_flag("--no-log", no_log, "do not append to the experiment log");

    Session session;
    std::function<int()> action;
    Common c;
    Params P;

    auto add_iet = [&](CLI::App* sub) { sub->add_option("--iet", c.iet, "IET file or builtin: golden, symmetric3, bounded3"); };
    auto add_roof = [&](CLI::App* sub) { sub->add_option("--roof", c.roof, "roof file or builtin: golden, constant"); };
    auto add_accel = [&](CLI::App* sub) {
        sub->add_option("--nu", c.nu, "balance constant");
        sub->add_option("--lbar-max", c.lbar_max, "largest positivity window tried");
    };
    auto add_csv = [&](CLI::App* sub) { sub->add_option("--csv", c.csv, "write the series as CSV"); };

    // iet
    auto* iet = app.add_subcommand("iet", "interval exchange maps");
    iet->require_subcommand(1);
    std::string x_text = "0", y_text;
    long long n_iter = 1;
    std::size_t depth = 30;
    {
        auto* ev = iet->add_subcommand("eval", "evaluate T^n at a point");
        add_iet(ev);
        ev->add_option("--x", x_text, "point (exact scalar)")->required();
        ev->add_option("--n", n_iter, "iterate (negative for T^-1)");
        ev->callback([&] {
            action = [&] {
                session.command = "iet eval";
                const Iet T = load_iet(c.iet);
                const ExactScalar x = parse_scalar(x_text, "x");
                session.config = {{"iet", iet_to_json(T)}, {"x", x.str()}, {"n", n_iter}};
                if (x.sign() < 0 || !(x < T.total())) throw FormatError("x", "--x must lie in [0, |I|)");
                session.emit({{"record", "eval"}, {"x", x.str()}, {"n", n_iter}, {"value", iterate(T, T.inverse(), x, n_iter).str()}});
                return kOk;
            };
        });
        auto* inv = iet->add_subcommand("invert", "inverse IET");
        add_iet(inv);
        inv->callback([&] {
            action = [&] {
                session.command = "iet invert";
                const Iet T = load_iet(c.iet);
                session.config = {{"iet", iet_to_json(T)}};
                Json r = iet_to_json(T.inverse());
                r["record"] = "iet";
                session.emit(r);
                return kOk;
            };
        });
        auto* ke = iet->add_subcommand("keane", "search for discontinuity-orbit collisions");
        add_iet(ke);
        ke->add_option("--depth", depth, "orbit length examined");
        ke->callback([&] {
            action = [&] {
                session.command = "iet keane";
                const Iet T = load_iet(c.iet);
                session.config = {{"iet", iet_to_json(T)}, {"depth", depth}};
                const KeaneReport k = keane_check(T, depth);
                Json r{{"record", "keane"}, {"satisfied_to_depth", k.satisfied_to_depth}, {"depth", k.depth}};
                if (k.colliding_pair)
                    r["collision"] = {{"letter", T.perm().label(k.colliding_pair->letter)},
                                      {"hit", T.perm().label(k.colliding_pair->hit_letter)},
                                      {"step", k.colliding_pair->step}};
                else
                    r["collision"] = nullptr;
                session.emit(r);
                return k.satisfied_to_depth ? kOk : kCheckFailed;
            };
        });
    }

    // rv
    auto* rv = app.add_subcommand("rv", "Rauzy-Veech induction");
    rv->require_subcommand(1);
    std::size_t steps = 25, at = 10;
    {
        auto* ind = rv->add_subcommand("induct", "trace records, one per step");
        add_iet(ind);
        ind->add_option("--steps", steps, "number of steps");
        ind->callback([&] {
            action = [&] {
                session.command = "rv induct";
                const Iet T = load_iet(c.iet);
                session.config = {{"iet", iet_to_json(T)}, {"steps", steps}};
                InductionTrace tr(T);
                const std::size_t reached = tr.extend_until(steps);
                session.fingerprint = tr.fingerprint();
                for (std::size_t n = 1; n <= reached; ++n) session.emit(trace_record(tr, n));
                if (reached < steps) {
                    session.emit({{"record", "rv_undefined"}, {"step", reached}});
                    return kCheckFailed;
                }
                return kOk;
            };
        });
        auto* tw = rv->add_subcommand("towers", "Rohlin towers at a depth");
        add_iet(tw);
        tw->add_option("--at", at, "induction depth");
        tw->callback([&] {
            action = [&] {
                session.command = "rv towers";
                const Iet T = load_iet(c.iet);
                session.config = {{"iet", iet_to_json(T)}, {"at", at}};
                InductionTrace tr(T);
                tr.extend(at);
                session.fingerprint = tr.fingerprint();
                const TowerSystem ts = towers(tr, at);
                for (std::size_t a = 0; a < T.size(); ++a)
                    session.emit({{"record", "tower"}, {"letter", T.perm().alphabet()[a]},
                                  {"base", {ts.base_left[a].str(), ts.base_right[a].str()}},
                                  {"height", ts.heights[a].get_str()},
                                  {"return_time", return_time_oracle(tr, at, static_cast<int>(a))}});
                session.emit({{"record", "towers"}, {"n", at}, {"floors", ts.floors.size()},
                              {"partition_ok", ts.partition_ok}, {"floors_map_up", ts.floors_map_up}});
                return ts.partition_ok && ts.floors_map_up ? kOk : kCheckFailed;
            };
        });
        auto* ac = rv->add_subcommand("accel", "balanced positive acceleration times");
        add_iet(ac);
        add_accel(ac);
        ac->add_option("--steps", steps, "induction depth")->default_val(60);
        ac->callback([&] {
            action = [&] {
                session.command = "rv accel";
                const Iet T = load_iet(c.iet);
                const mpq_class nu = parse_rational(c.nu, "nu");
                session.config = {{"iet", iet_to_json(T)}, {"steps", steps}, {"nu", c.nu}, {"lbar_max", c.lbar_max}};
                const Acceleration acc = Acceleration::build(T, steps, nu, c.lbar_max);
                session.fingerprint = acc.trace().fingerprint();
                Json times = Json::array();
                for (std::size_t t : acc.times().times) times.push_back(t);
                Json r{{"record", "accel"}, {"depth", acc.trace().depth()}, {"times", times}, {"nu", c.nu}};
                r["lbar"] = acc.times().lbar ? Json(*acc.times().lbar) : Json(nullptr);
                r["diagnostic"] = acc.times().diagnostic;
                session.emit(r);
                for (std::size_t l = 0; l < acc.norm_count(); ++l)
                    session.emit({{"record", "level"}, {"l", l}, {"n", acc.n(l)}, {"q", acc.q(l).get_str()},
                                  {"normA", acc.norm_A(l).get_str()}});
                return acc.times().lbar ? kOk : kCheckFailed;
            };
        });
    }

    // zip
    auto* zip = app.add_subcommand("zip", "zippered rectangles");
    zip->require_subcommand(1);
    std::size_t back_steps = 5;
    std::string tau_text;
    {
        auto* bw = zip->add_subcommand("backward", "backward Rauzy-Veech steps from suspension data (default: tilted canonical)");
        add_iet(bw);
        bw->add_option("--steps", back_steps, "number of backward steps");
        bw->add_option("--tau", tau_text, "suspension data, comma-separated exact scalars in alphabet order");
        bw->callback([&] {
            action = [&] {
                session.command = "zip backward";
                const Iet T = load_iet(c.iet);
                session.config = {{"iet", iet_to_json(T)}, {"steps", back_steps}};
                SuspensionData tau;
                if (tau_text.empty()) {
                    tau = tilted_tau(T.perm());
                } else {
                    std::stringstream ss(tau_text);
                    std::string tok;
                    while (std::getline(ss, tok, ',')) tau.tau.push_back(parse_scalar(tok, "tau"));
                    if (tau.tau.size() != T.size()) throw FormatError("tau", "--tau needs one entry per letter");
                    if (!in_theta(T.perm(), tau)) throw FormatError("tau", "--tau violates the sign conditions");
                }
                session.config["tau"] = Json::array();
                for (const auto& v : tau.tau) session.config["tau"].push_back(v.str());
                ZipperedRectangles z(T, tau);
                Json r0 = triple_to_json(z);
                r0["record"] = "triple";
                r0["k"] = 0;
                session.emit(r0);
                for (std::size_t k = 1; k <= back_steps; ++k) {
                    try {
                        BackwardStep b = backward_rv_step(z);
                        z = b.z;
                        Json r = triple_to_json(z);
                        r["record"] = "triple";
                        r["k"] = k;
                        r["type"] = std::string(1, step_char(b.type));
                        r["area"] = z.area().str();
                        session.emit(r);
                    } catch (const BackwardUndefined& e) {
                        session.emit({{"record", "backward_undefined"}, {"k", k}, {"detail", e.what()}});
                        return kCheckFailed;
                    }
                }
                return kOk;
            };
        });
    }

    // flow
    auto* flow_cmd = app.add_subcommand("flow", "special flow under the roof");
    flow_cmd->require_subcommand(1);
    double y0 = 0.0, t_flow = 1.0;
    long long r_sum = 100;
    int order = 0;
    {
        auto* orb = flow_cmd->add_subcommand("orbit", "flow a point for time t");
        add_iet(orb);
        add_roof(orb);
        orb->add_option("--x", x_text, "base point (exact scalar)")->required();
        orb->add_option("--y", y0, "height");
        orb->add_option("--t", t_flow, "time")->required();
        orb->callback([&] {
            action = [&] {
                session.command = "flow orbit";
                const Iet T = load_iet(c.iet);
                const RoofSpec spec = load_roof(c.roof, T);
                const ExactScalar x = parse_scalar(x_text, "x");
                session.config = {{"iet", iet_to_json(T)}, {"roof", roof_to_json(spec, T)}, {"x", x.str()},
                                  {"y", y0}, {"t", t_flow}, {"precision", default_precision()}};
                const FlowPoint p = flow(spec, T, FlowPoint{x, y0}, t_flow);
                session.emit({{"record", "flow"}, {"x", p.x.str()}, {"y", p.y},
                              {"r", discrete_iterations(spec, T, x, y0 + t_flow)}});
                return kOk;
            };
        });
        auto* bk = flow_cmd->add_subcommand("birkhoff", "Birkhoff sum of the roof or its derivative");
        add_iet(bk);
        add_roof(bk);
        bk->add_option("--x", x_text, "base point (exact scalar)")->required();
        bk->add_option("--r", r_sum, "number of terms (negative for the inverse orbit)")->required();
        bk->add_option("--order", order, "0 for f, 1 for f'")->check(CLI::Range(0, 1));
        bk->callback([&] {
            action = [&] {
                session.command = "flow birkhoff";
                const Iet T = load_iet(c.iet);
                const RoofSpec spec = load_roof(c.roof, T);
                const ExactScalar x = parse_scalar(x_text, "x");
                session.config = {{"iet", iet_to_json(T)}, {"roof", roof_to_json(spec, T)}, {"x", x.str()},
                                  {"r", r_sum}, {"order", order}, {"precision", default_precision()}};
                const Evaluation e = birkhoff_sum(spec, T, x, r_sum, order);
                session.emit({{"record", "birkhoff"}, {"value", e.value}, {"radius", e.radius}});
                return kOk;
            };
        });
    }

    // bs
    auto* bs = app.add_subcommand("bs", "Birkhoff-sum analysis");
    bs->require_subcommand(1);
    std::string r_grid = "1000,3000,10000,30000";
    std::size_t l_max = 15;
    double tolerance = 0.15;
    {
        auto* gr = bs->add_subcommand("growth", "derivative-sum growth against r log r");
        add_iet(gr);
        add_roof(gr);
        add_accel(gr);
        add_csv(gr);
        add_params(gr, P);
        gr->add_option("--x", x_text, "base point (exact scalar)")->required();
        gr->add_option("--r-grid", r_grid, "comma-separated orbit lengths");
        gr->add_option("--tolerance", tolerance, "band half-width");
        gr->callback([&] {
            action = [&] {
                session.command = "bs growth";
                const Iet T = load_iet(c.iet);
                const RoofSpec spec = load_roof(c.roof, T);
                const ExactScalar x = parse_scalar(x_text, "x");
                const auto rs = parse_grid(r_grid, "r-grid");
                const double tp = parse_rational(P.tau_prime, "tau-prime").get_d();
                session.config = {{"iet", iet_to_json(T)}, {"roof", roof_to_json(spec, T)}, {"x", x.str()},
                                  {"r_grid", r_grid}, {"tau_prime", P.tau_prime}, {"tolerance", tolerance},
                                  {"nu", c.nu}, {"precision", default_precision()}};
                Acceleration acc = accelerate(T, 8, parse_rational(c.nu, "nu"), c.lbar_max);
                while (!acc.level_of(mpz_class(static_cast<long>(rs.back()))) ||
                       *acc.level_of(mpz_class(static_cast<long>(rs.back()))) + 2 >= acc.count())
                    acc = accelerate(T, acc.count() * 2 + 4, acc.nu(), c.lbar_max);
                session.fingerprint = acc.trace().fingerprint();
                std::vector<SigmaSet> sets;
                std::vector<const SigmaSet*> ptrs;
                sets.reserve(rs.size());
                for (long long r : rs) sets.push_back(sigma_set(acc, *acc.level_of(mpz_class(static_cast<long>(r))), tp));
                for (const auto& s : sets) ptrs.push_back(&s);
                GrowthConfig cfg;
                cfg.tolerance = tolerance;
                const auto reps = derivative_growth_series(spec, T, x, rs, ptrs, cfg);
                Csv csv(c.csv, {"r", "S", "radius", "ratio", "oriented_ratio", "U", "V", "in_band"});
                bool all = true;
                for (std::size_t i = 0; i < rs.size(); ++i) {
                    session.emit(report_json(T, spec, x, rs[i], reps[i]));
                    csv.row(rs[i], reps[i].S, reps[i].S_radius, reps[i].ratio, reps[i].oriented_ratio, reps[i].U,
                            reps[i].V, reps[i].in_band);
                    all = all && reps[i].in_band;
                }
                return all ? kOk : kCheckFailed;
            };
        });
        auto* ss = bs->add_subcommand("sigma-sets", "bad sets and their measure bounds");
        add_iet(ss);
        add_accel(ss);
        add_csv(ss);
        add_params(ss, P);
        ss->add_option("--l-max", l_max, "largest level");
        ss->callback([&] {
            action = [&] {
                session.command = "bs sigma-sets";
                const Iet T = load_iet(c.iet);
                const double tp = parse_rational(P.tau_prime, "tau-prime").get_d();
                session.config = {{"iet", iet_to_json(T)}, {"l_max", l_max}, {"tau_prime", P.tau_prime},
                                  {"nu", c.nu}, {"lbar_max", c.lbar_max}};
                const Acceleration acc = accelerate(T, l_max + 3, parse_rational(c.nu, "nu"), c.lbar_max);
                session.fingerprint = acc.trace().fingerprint();
                if (acc.count() < l_max + 2) throw DomainError("trace too short for --l-max");
                Csv csv(c.csv, {"l", "sigma", "measure", "bound", "q", "normA"});
                bool all = true;
                for (std::size_t l = 0; l <= l_max; ++l) {
                    const SigmaSet s = sigma_set(acc, l, tp);
                    session.emit({{"record", "sigma_set"}, {"l", l}, {"sigma", s.sigma}, {"measure", s.measure.str()},
                                  {"bound", s.bound.get_str()}, {"bound_holds", s.bound_holds},
                                  {"q", acc.q(l).get_str()}, {"normA", acc.norm_A(l).get_str()}});
                    csv.row(l, s.sigma, s.measure.to_double(), s.bound.get_d(), acc.q(l), acc.norm_A(l));
                    all = all && s.bound_holds;
                }
                return all ? kOk : kCheckFailed;
            };
        });
    }

    // dc
    auto* dc = app.add_subcommand("dc", "Diophantine conditions along the acceleration");
    dc->require_subcommand(1);
    std::size_t dc_depth = 30, exact_max = 12;
    double threshold = 1.0;
    {
        auto* mx = dc->add_subcommand("mixing", "balance, positivity and integrability series");
        add_iet(mx);
        add_accel(mx);
        add_csv(mx);
        add_params(mx, P);
        mx->add_option("--depth", dc_depth, "number of levels");
        mx->add_option("--threshold", threshold, "integrability threshold");
        mx->callback([&] {
            action = [&] {
                session.command = "dc mixing";
                const Iet T = load_iet(c.iet);
                dc_base(session, T, c);
                session.config["depth"] = dc_depth;
                session.config["threshold"] = threshold;
                P.echo(session.config);
                const Acceleration acc = accelerate(T, dc_depth + 12, parse_rational(c.nu, "nu"), c.lbar_max);
                session.fingerprint = acc.trace().fingerprint();
                const DcParams params = resolve_params(acc, P);
                const MixingDcReport r = mixing_dc_report(acc, params, dc_depth, threshold);
                Json rec{{"record", "mixing_dc"}, {"levels", r.levels}, {"insufficient_depth", r.insufficient_depth},
                         {"all_balanced", r.all_balanced}, {"all_positive", r.all_positive}, {"D", r.D},
                         {"lbar", params.lbar}, {"L", params.L}};
                rec["below_from"] = r.below_from ? Json(*r.below_from) : Json(nullptr);
                session.emit(rec);
                Csv csv(c.csv, {"l", "balanced", "window_positive", "integrability"});
                for (std::size_t l = 0; l < r.levels; ++l) {
                    const bool pos = l < r.window_positive.size() && r.window_positive[l];
                    const double integ = l >= 1 && l - 1 < r.integrability.size() ? r.integrability[l - 1] : NAN;
                    csv.row(l, static_cast<bool>(r.balanced[l]), pos, integ);
                }
                return r.all_balanced && r.all_positive && !r.insufficient_depth ? kOk : kCheckFailed;
            };
        });
        auto* ra = dc->add_subcommand("ratner", "bad set and partial sums of the Ratner condition");
        add_iet(ra);
        add_accel(ra);
        add_csv(ra);
        add_params(ra, P);
        ra->add_option("--depth", dc_depth, "last level examined");
        ra->callback([&] {
            action = [&] {
                session.command = "dc ratner";
                const Iet T = load_iet(c.iet);
                dc_base(session, T, c);
                session.config["depth"] = dc_depth;
                P.echo(session.config);
                const mpq_class nu = parse_rational(c.nu, "nu");
                Acceleration acc = accelerate(T, 12, nu, c.lbar_max);
                DcParams params = resolve_params(acc, P);
                acc = accelerate(T, dc_levels(dc_depth, params.L), nu, c.lbar_max);
                params = resolve_params(acc, P);
                session.fingerprint = acc.trace().fingerprint();
                const DcSeries s = DcSeries::from(acc);
                const RatnerDcPartial r = ratner_dc_partial(s, params, dc_depth);
                Json bad = Json::array();
                for (auto l : r.bad_indices) bad.push_back(l);
                session.emit({{"record", "ratner_dc"}, {"bad_indices", bad}, {"partial_sum", r.partial_sum},
                              {"horizon", r.horizon}, {"L", params.L}});
                Csv csv(c.csv, {"l", "bad", "running_sum", "window_product", "in_K"});
                for (std::size_t l = 1; l <= r.horizon; ++l) {
                    const bool b = std::find(r.bad_indices.begin(), r.bad_indices.end(), l) != r.bad_indices.end();
                    csv.row(l, b, r.running_sum[l - 1], window_norm_product(s, l, params.L),
                            k_set_membership(s, params, l));
                }
                return kOk;
            };
        });
        auto* sm = dc->add_subcommand("summability", "summability partial sums");
        add_iet(sm);
        add_accel(sm);
        add_csv(sm);
        add_params(sm, P);
        sm->add_option("--depth", dc_depth, "last level examined");
        sm->add_option("--exact-max-level", exact_max, "levels with exact measures");
        sm->callback([&] {
            action = [&] {
                session.command = "dc summability";
                const Iet T = load_iet(c.iet);
                dc_base(session, T, c);
                session.config["depth"] = dc_depth;
                session.config["exact_max_level"] = exact_max;
                P.echo(session.config);
                const mpq_class nu = parse_rational(c.nu, "nu");
                Acceleration acc = accelerate(T, 12, nu, c.lbar_max);
                DcParams params = resolve_params(acc, P);
                acc = accelerate(T, dc_levels(dc_depth, params.L), nu, c.lbar_max);
                params = resolve_params(acc, P);
                session.fingerprint = acc.trace().fingerprint();
                const SummabilityPartial r = summability_partial(acc, params, dc_depth, exact_max);
                Json out = Json::array(), mem = Json::array();
                for (auto l : r.outside) out.push_back(l);
                for (auto l : r.members) mem.push_back(l);
                session.emit({{"record", "summability"}, {"outside", out}, {"members", mem},
                              {"sum_sigma_eta", r.sum_sigma_eta}, {"sum_measures", r.sum_measures},
                              {"sum_bounds", r.sum_bounds}, {"exact_levels", r.exact_levels},
                              {"horizon", r.horizon}});
                Csv csv(c.csv, {"index", "running_sigma_eta", "running_measures"});
                for (std::size_t i = 0; i < r.running_sigma_eta.size(); ++i)
                    csv.row(i, r.running_sigma_eta[i], r.running_measures[i]);
                return kOk;
            };
        });
    }

    // ratner
    auto* rat = app.add_subcommand("ratner", "switchable Ratner witnesses");
    rat->require_subcommand(1);
    WitnessConfig wcfg;
    double min_rate = 0.9;
    bool serial = false;
    std::string l_range = "6..12";
    std::size_t grid = 1000;
    double eps_fb = 0.2;
    {
        auto* wi = rat->add_subcommand("witness", "sample pairs and verify the SR clause");
        add_iet(wi);
        add_roof(wi);
        add_accel(wi);
        add_params(wi, P);
        wi->add_option("--eps", wcfg.eps, "epsilon");
        wi->add_option("--N", wcfg.N, "minimal orbit length N");
        wi->add_option("--pairs", wcfg.pairs, "number of pairs");
        wi->add_option("--seed", wcfg.seed, "random seed");
        wi->add_option("--gap", wcfg.gap, "nominal pair distance");
        wi->add_option("--gap-jitter", wcfg.gap_jitter, "relative spread of distances");
        wi->add_option("--delta", wcfg.delta, "pair-distance bound");
        wi->add_option("--min-rate", min_rate, "success rate required for exit status 0");
        wi->add_flag("--serial", serial, "disable OpenMP");
        wi->callback([&] {
            action = [&] {
                session.command = "ratner witness";
                const Iet T = load_iet(c.iet);
                const RoofSpec spec = load_roof(c.roof, T);
                dc_base(session, T, c);
                session.config["roof"] = roof_to_json(spec, T);
                P.echo(session.config);
                session.config["eps"] = wcfg.eps;
                session.config["N"] = wcfg.N;
                session.config["pairs"] = wcfg.pairs;
                session.config["gap"] = wcfg.gap;
                session.config["gap_jitter"] = wcfg.gap_jitter;
                session.config["delta"] = wcfg.delta;
                session.config["reverify_precision"] = wcfg.reverify_prec;
                session.seed = wcfg.seed;
                const mpq_class nu = parse_rational(c.nu, "nu");
                Acceleration acc = accelerate(T, 12, nu, c.lbar_max);
                DcParams params = resolve_params(acc, P);
                const double g = std::abs(spec.gap()) > 0 ? std::abs(spec.gap()) : 1.0;
                const long long r_hi = pair_scale(g, wcfg.gap * (1.0 - wcfg.gap_jitter));
                while (!acc.level_of(mpz_class(static_cast<long>(r_hi))) ||
                       *acc.level_of(mpz_class(static_cast<long>(r_hi))) + params.L + 3 >= acc.count())
                    acc = accelerate(T, acc.count() * 2 + 4, nu, c.lbar_max);
                params = resolve_params(acc, P);
                session.fingerprint = acc.trace().fingerprint();
                const auto levels = witness_levels(acc, params, spec, wcfg);
                const GoodSet good(acc, wcfg.eps, params.tau_prime_d(), params.xi_d(), levels);
                const WitnessSummary s = witness_experiment(acc, params, spec, wcfg, good, !serial);
                for (const auto& w : s.results) session.emit(witness_json(w));
                Json lv = Json::array();
                for (auto l : levels) lv.push_back(l);
                session.emit({{"record", "witness_summary"}, {"attempted", s.attempted}, {"verified", s.verified},
                              {"reverified", s.reverified}, {"switched", s.switched},
                              {"direction_conflicts", s.direction_conflicts}, {"rate", s.rate}, {"levels", lv},
                              {"good_measure", good.good_measure()}});
                return s.rate >= min_rate && s.reverified == s.verified ? kOk : kCheckFailed;
            };
        });
        auto* fb = rat->add_subcommand("forbac", "forward/backward control on a grid");
        add_iet(fb);
        add_accel(fb);
        add_params(fb, P);
        fb->add_option("--l-range", l_range, "levels A..B");
        fb->add_option("--grid", grid, "grid points per level");
        fb->add_option("--eps", eps_fb, "epsilon (sets the margins)");
        fb->callback([&] {
            action = [&] {
                session.command = "ratner forbac";
                const Iet T = load_iet(c.iet);
                const auto [la, lb] = parse_range(l_range);
                dc_base(session, T, c);
                P.echo(session.config);
                session.config["l_range"] = l_range;
                session.config["grid"] = grid;
                session.config["eps"] = eps_fb;
                const mpq_class nu = parse_rational(c.nu, "nu");
                Acceleration acc = accelerate(T, 12, nu, c.lbar_max);
                DcParams params = resolve_params(acc, P);
                acc = accelerate(T, lb + params.L + 4, nu, c.lbar_max);
                params = resolve_params(acc, P);
                session.fingerprint = acc.trace().fingerprint();
                const ExactScalar margin = dyadic(eps_fb / 8.0) * T.total();
                const ExactScalar width = T.total() - margin - margin;
                bool all = true;
                for (std::size_t l = la; l <= lb; ++l) {
                    std::size_t fwd = 0, bwd = 0, either = 0;
                    for (std::size_t k = 0; k < grid; ++k) {
                        const ExactScalar x = margin + width * ExactScalar(mpq_class(2 * static_cast<long>(k) + 1, 2 * static_cast<long>(grid)));
                        const ForbacReport r = forbac_scan(acc, x, l, params.L, eps_fb);
                        fwd += r.forward;
                        bwd += r.backward;
                        either += r.forward || r.backward;
                    }
                    session.emit({{"record", "forbac"}, {"l", l}, {"points", grid}, {"forward", fwd},
                                  {"backward", bwd}, {"either", either}});
                    all = all && either == grid;
                }
                return all ? kOk : kCheckFailed;
            };
        });
    }

    // mix
    auto* mix = app.add_subcommand("mix", "mixing probes");
    mix->require_subcommand(1);
    std::vector<double> ts{0, 5, 200};
    std::size_t samples = 1000000;
    std::uint64_t mix_seed = 1;
    std::vector<double> bump{0.5, 0.2, 0.5, 0.4};
    {
        auto* co = mix->add_subcommand("correlate", "correlations of a centered bump");
        add_iet(co);
        add_roof(co);
        co->add_option("--t", ts, "times")->delimiter(',');
        co->add_option("--samples", samples, "Monte-Carlo samples");
        co->add_option("--seed", mix_seed, "random seed");
        co->add_option("--bump", bump, "cx,wx,cy,wy")->delimiter(',')->expected(4);
        co->add_flag("--serial", serial, "disable OpenMP");
        co->callback([&] {
            action = [&] {
                session.command = "mix correlate";
                const Iet T = load_iet(c.iet);
                const RoofSpec spec = load_roof(c.roof, T);
                session.config = {{"iet", iet_to_json(T)}, {"roof", roof_to_json(spec, T)}, {"t", ts},
                                  {"samples", samples}, {"bump", bump}};
                session.seed = mix_seed;
                const MixingProbe probe(spec, T);
                Observable o;
                try {
                    o = Observable::bump(bump[0], bump[1], bump[2], bump[3], true);
                } catch (const DomainError& e) {
                    throw FormatError("bump", e.what());
                }
                if (!probe.support_under_graph(o)) throw FormatError("bump", "bump support is not under the roof");
                const BoundObservable g = probe.bind(o);
                for (double t : ts) {
                    const Estimate e = probe.correlation(g, g, t, samples, mix_seed, !serial);
                    session.emit({{"record", "correlation"}, {"t", t}, {"value", e.value}, {"stderr", e.stderr_},
                                  {"samples", e.samples}, {"variance", g.variance()}});
                }
                return kOk;
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        const int status = action();
        std::cout << session.provenance().dump() << "\n";
        for (const auto& r : session.results) std::cout << r.dump() << "\n";
        if (!no_log) append_log(log_path, session);
        return status;
    } catch (const FormatError& e) {
        std::cerr << "usage error [" << e.field << "]: " << e.what() << "\n";
        return kUsage;
    } catch (const ConstraintViolation& e) {
        std::cerr << "usage error [" << e.constraint << "]: " << e.what() << "\n";
        return kUsage;
    } catch (const IndeterminateComparison& e) {
        std::cerr << "IndeterminateComparison: " << e.what() << "\n";
        return kCheckFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCheckFailed;
    }
}
