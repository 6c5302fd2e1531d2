#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "semiorbit/analytic_f.hpp"
#include "semiorbit/cf_search.hpp"
#include "semiorbit/dimension.hpp"
#include "semiorbit/kronecker.hpp"
#include "semiorbit/psi_orbit.hpp"
#include "semiorbit/semigroups.hpp"
#include "semiorbit/verify.hpp"
#include "semiorbit/words.hpp"

namespace semiorbit::cli {

namespace {

using ojson = nlohmann::ordered_json;

constexpr int kSchema = 1;

enum class Format { Plain, Json, Csv };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::string format = "plain";
    std::uint64_t seed = 1;
    int threads = 0;
};

Format parse_format(const std::string& s)
{
    if (s == "plain") {
        return Format::Plain;
    }
    if (s == "json") {
        return Format::Json;
    }
    if (s == "csv") {
        return Format::Csv;
    }
    throw UsageError("unknown format '" + s + "'");
}

ojson envelope()
{
    ojson j;
    j["schema_version"] = kSchema;
    return j;
}

Vec64 parse_vec64(const std::string& text)
{
    Vec2 v = parse_fraction(text);
    return {to_u64(v.x()), to_u64(v.y())};
}

std::uint64_t parse_u64(const std::string& text)
{
    return parse_count(text);
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

// Prints "label done/total" at most once per second, only once a second has passed.
ProgressFn progress_printer(std::ostream& err, std::string label)
{
    auto start = std::chrono::steady_clock::now();
    auto last = std::make_shared<std::chrono::steady_clock::time_point>(start);
    return [&err, label, last](std::uint64_t done, std::uint64_t total) {
        auto now = std::chrono::steady_clock::now();
        if (now - *last >= std::chrono::seconds(1)) {
            *last = now;
            err << label << ": " << done << "/" << total << '\n' << std::flush;
        }
    };
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw DomainError("cannot open " + path + " for writing");
    }
    f << text;
    if (!f.flush()) {
        throw DomainError("failed writing " + path);
    }
}

ojson report_json(const ObstructionReport& r)
{
    ojson j;
    j["side"] = side_name(r.side);
    j["modulus"] = r.modulus;
    j["residues"] = r.residues;
    j["reciprocity"] = r.reciprocity;
    j["square_threshold"] = r.square_threshold;
    j["nonsquare_threshold"] = r.nonsquare_threshold;
    j["sporadic"] = r.sporadic;
    j["sporadic_complete"] = r.complete;
    return j;
}

std::string join(const std::vector<std::uint64_t>& v, const char* sep)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        os << (i ? sep : "") << v[i];
    }
    return os.str();
}

void emit_plain_report(std::ostream& out, const ObstructionReport& r)
{
    out << side_name(r.side) << ": residues mod " << r.modulus << " {" << join(r.residues, ",") << "}"
        << " reciprocity=" << bool_str(r.reciprocity) << " square_threshold=" << r.square_threshold
        << " nonsquare_threshold=" << r.nonsquare_threshold;
    if (r.complete) {
        out << " sporadic={" << join(r.sporadic, ",") << "}";
    }
    out << '\n';
}

struct Ctx {
    Format fmt;
    Globals g;
    std::ostream& out;
    std::ostream& err;

    ExecPolicy policy(const std::string& label) const
    {
        ExecPolicy p;
        p.threads = g.threads;
        p.progress = progress_printer(err, label);
        return p;
    }
};

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Orbit obstruction toolkit for continued-fraction semigroups", "semiorbit"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--format", g.format, "Output format: plain, json or csv");
    app.add_option("--seed", g.seed, "Seed for randomized checks");
    app.add_option("--threads", g.threads, "Worker threads (default: SEMIORBIT_THREADS or all cores)")
        ->check(CLI::Range(1, 4096));

    std::string s1, s2, s3, s4, side_s = "num", out_path, gens_s, start_s, target_s, bound_s, checkpoint;
    std::string from_s, to_s, nmax_s, witness_s, only_s;
    std::uint64_t modulus = 4, points = kDefaultPoints, max_roots = 0;
    double drop = kDefaultDropFraction;
    bool quick = false, scan_squares = false, complete = false;

    auto* kron = app.add_subcommand("kron", "Kronecker symbol (x|y)");
    kron->add_option("x", s1)->required();
    kron->add_option("y", s2)->required();

    auto* cf = app.add_subcommand("cf", "Even continued fraction of x/y");
    cf->add_option("fraction", s1)->required();

    auto* word = app.add_subcommand("word", "LR word W with W(1,0) = (x,y)");
    word->add_option("fraction", s1)->required();

    auto* pmem = app.add_subcommand("psi-member", "Membership of (a b; c d) in Psi");
    pmem->add_option("a", s1)->required();
    pmem->add_option("b", s2)->required();
    pmem->add_option("c", s3)->required();
    pmem->add_option("d", s4)->required();

    auto* otest = app.add_subcommand("orbit-test", "Does n occur on the given side of the Psi orbit of x/y");
    otest->add_option("fraction", s1)->required();
    otest->add_option("n", s2)->required();
    otest->add_option("--side", side_s, "num or den");

    auto* omiss = app.add_subcommand("orbit-missing", "Congruent values up to a bound missing from a Psi orbit");
    omiss->add_option("fraction", s1)->required();
    omiss->add_option("--side", side_s, "num or den");
    omiss->add_option("--bound", bound_s, "Upper bound (integer, scientific notation allowed)")->required();
    omiss->add_option("--out", out_path, "Write the JSON report here");
    omiss->add_flag("--scan-squares", scan_squares, "Scan squares excluded by reciprocity instead of listing them");

    auto* cls = app.add_subcommand("classify", "Congruence and reciprocity obstructions of a Psi orbit");
    cls->add_option("fraction", s1)->required();
    cls->add_flag("--complete", complete, "Scan below the effective thresholds for sporadic exceptions");

    auto* en = app.add_subcommand("enumerate", "Orbit points with both components <= bound");
    en->add_option("--gens", gens_s)->required();
    en->add_option("--start", start_s)->required();
    en->add_option("--bound", bound_s)->required();
    en->add_option("--out", out_path, "Write CSV here");

    auto* res = app.add_subcommand("residues", "Residues of orbit numerators or denominators");
    res->add_option("--gens", gens_s)->required();
    res->add_option("--start", start_s)->required();
    res->add_option("--mod", modulus)->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{65535}));
    res->add_option("--side", side_s);

    auto* mem = app.add_subcommand("member", "Orbit membership by pullback");
    mem->add_option("--gens", gens_s)->required();
    mem->add_option("--start", start_s)->required();
    mem->add_option("--target", target_s)->required();

    auto* fw = app.add_subcommand("fwindow", "Window function f(n)");
    fw->add_option("n", s1)->required();

    auto* fwv = app.add_subcommand("fwindow-verify", "Check both upper bounds for f(n) over a range");
    fwv->add_option("--from", from_s)->required();
    fwv->add_option("--to", to_s)->required();

    auto* cfs = app.add_subcommand("cfsearch", "Denominator search over [0; 4a_1, ..., 4a_n, k, 1, 2]");
    cfs->add_option("--bound", bound_s)->required();
    cfs->add_option("--checkpoint", checkpoint, "Manifest path for checkpoint and resume");
    cfs->add_option("--out", out_path, "Write the manifest JSON here");
    cfs->add_option("--max-roots", max_roots, "Stop after this many roots (resumable)");
    cfs->add_option("--witness", witness_s, "Print a continued fraction with this denominator");

    auto* hd = app.add_subcommand("hdim", "Dimension estimate from orbit counts (non-rigorous)");
    hd->add_option("--gens", gens_s)->required();
    hd->add_option("--start", start_s)->required();
    hd->add_option("--nmax", nmax_s)->required();
    hd->add_option("--points", points)->check(CLI::Range(std::uint64_t{3}, std::uint64_t{1000}));
    hd->add_option("--drop", drop, "Fraction of smallest thresholds left out of the fit");

    auto* va = app.add_subcommand("verify-all", "Run the acceptance checks");
    va->add_flag("--quick", quick, "Reduced scales");
    va->add_option("--only", only_s, "Comma-separated criterion ids");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsageError;
    }

    try {
        Ctx ctx{parse_format(g.format), g, out, err};
        auto* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        const Format fmt = ctx.fmt;

        if (name == "kron") {
            BigInt x = parse_bigint(s1), y = parse_bigint(s2);
            int k = kronecker(x, y).value;
            if (fmt == Format::Json) {
                ojson j = envelope();
                j["x"] = to_string(x);
                j["y"] = to_string(y);
                j["symbol"] = k;
                out << j.dump(2) << '\n';
            } else if (fmt == Format::Csv) {
                out << "x,y,symbol\n" << x << ',' << y << ',' << k << '\n';
            } else {
                out << k << '\n';
            }
        } else if (name == "cf" || name == "word") {
            Vec2 v = parse_fraction(s1);
            if (name == "cf") {
                ContinuedFraction c = even_cf(v);
                if (fmt == Format::Json) {
                    ojson j = envelope();
                    j["fraction"] = v.str();
                    j["a0"] = to_string(c.a0);
                    j["coeffs"] = ojson::array();
                    for (const auto& a : c.coeffs) {
                        j["coeffs"].push_back(to_string(a));
                    }
                    out << j.dump(2) << '\n';
                } else if (fmt == Format::Csv) {
                    out << "index,coefficient\n0," << c.a0 << '\n';
                    for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
                        out << i + 1 << ',' << c.coeffs[i] << '\n';
                    }
                } else {
                    out << c.str() << '\n';
                }
            } else {
                LRWord w = vec_to_word(v);
                if (fmt == Format::Json) {
                    ojson j = envelope();
                    j["fraction"] = v.str();
                    j["word"] = w.str();
                    j["runs"] = ojson::array();
                    for (const auto& r : w.runs()) {
                        j["runs"].push_back({{"letter", r.letter == Letter::L ? "L" : "R"}, {"exp", to_string(r.exp)}});
                    }
                    out << j.dump(2) << '\n';
                } else if (fmt == Format::Csv) {
                    out << "letter,exp\n";
                    for (const auto& r : w.runs()) {
                        out << (r.letter == Letter::L ? "L" : "R") << ',' << r.exp << '\n';
                    }
                } else {
                    out << w.str() << '\n';
                }
            }
        } else if (name == "psi-member") {
            Mat2 m(parse_bigint(s1), parse_bigint(s2), parse_bigint(s3), parse_bigint(s4));
            const bool r = psi_member(m);
            if (fmt == Format::Json) {
                ojson j = envelope();
                j["matrix"] = m.str();
                j["member"] = r;
                out << j.dump(2) << '\n';
            } else if (fmt == Format::Csv) {
                out << "matrix,member\n\"" << m.str() << "\"," << bool_str(r) << '\n';
            } else {
                out << bool_str(r) << '\n';
            }
        } else if (name == "orbit-test") {
            auto [x, y] = parse_vec64(s1);
            const Side side = parse_side(side_s);
            const std::uint64_t n = parse_u64(s2);
            const bool r = appears(x, y, n, side);
            if (fmt == Format::Json) {
                ojson j = envelope();
                j["fraction"] = s1;
                j["side"] = side_name(side);
                j["n"] = n;
                j["appears"] = r;
                out << j.dump(2) << '\n';
            } else if (fmt == Format::Csv) {
                out << "x,y,side,n,appears\n" << x << ',' << y << ',' << side_name(side) << ',' << n << ',' << bool_str(r)
                    << '\n';
            } else {
                out << bool_str(r) << '\n';
            }
        } else if (name == "orbit-missing") {
            auto [x, y] = parse_vec64(s1);
            const Side side = parse_side(side_s);
            const std::uint64_t bound = parse_u64(bound_s);
            MissingOptions mo;
            mo.scan_flagged_squares = scan_squares;
            auto missing = orbit_missing(x, y, side, bound, ctx.policy("orbit-missing"), mo);
            ObstructionReport rep = classify_side(x, y, side);
            ojson j = envelope();
            j["fraction"] = s1;
            j["bound"] = bound;
            const ojson rj = report_json(rep);
            for (const auto& [k, v] : rj.items()) {
                j[k] = v;
            }
            j["missing"] = missing;
            if (!out_path.empty()) {
                write_file(out_path, j.dump(2) + "\n");
            }
            if (fmt == Format::Json) {
                out << j.dump(2) << '\n';
            } else if (fmt == Format::Csv) {
                out << "n,square\n";
                for (auto n : missing) {
                    out << n << ',' << bool_str(is_square(n)) << '\n';
                }
            } else {
                out << join(missing, " ") << '\n';
            }
        } else if (name == "classify") {
            auto [x, y] = parse_vec64(s1);
            std::vector<ObstructionReport> reps;
            for (Side side : {Side::Numerator, Side::Denominator}) {
                reps.push_back(complete ? orbit_complete_description(x, y, side, ctx.policy("classify"))
                                        : classify_side(x, y, side));
            }
            if (fmt == Format::Json) {
                ojson j = envelope();
                j["fraction"] = s1;
                j["sides"] = ojson::array();
                for (const auto& r : reps) {
                    j["sides"].push_back(report_json(r));
                }
                out << j.dump(2) << '\n';
            } else if (fmt == Format::Csv) {
                out << "side,modulus,residues,reciprocity,square_threshold,nonsquare_threshold,sporadic\n";
                for (const auto& r : reps) {
                    out << side_name(r.side) << ',' << r.modulus << ",\"" << join(r.residues, " ") << "\","
                        << bool_str(r.reciprocity) << ',' << r.square_threshold << ',' << r.nonsquare_threshold << ",\""
                        << (r.complete ? join(r.sporadic, " ") : std::string("na")) << "\"\n";
                }
            } else {
                for (const auto& r : reps) {
                    emit_plain_report(out, r);
                }
            }
        } else if (name == "enumerate") {
            auto gs = GeneratorSet::parse(gens_s);
            auto pts = enumerate_orbit(gs, parse_vec64(start_s), parse_u64(bound_s), ctx.policy("enumerate"));
            std::ostringstream csv;
            csv << "x,y\n";
            for (auto [x, y] : pts) {
                csv << x << ',' << y << '\n';
            }
            if (!out_path.empty()) {
                write_file(out_path, csv.str());
            }
            if (fmt == Format::Json) {
                ojson j = envelope();
                j["gens"] = gs.label();
                j["start"] = start_s;
                j["count"] = pts.size();
                j["points"] = ojson::array();
                for (auto [x, y] : pts) {
                    j["points"].push_back({x, y});
                }
                out << j.dump(2) << '\n';
            } else if (fmt == Format::Csv) {
                out << csv.str();
            } else if (out_path.empty()) {
                for (auto [x, y] : pts) {
                    out << x << '/' << y << '\n';
                }
            } else {
                out << pts.size() << " points written to " << out_path << '\n';
            }
        } else if (name == "residues") {
            auto gs = GeneratorSet::parse(gens_s);
            const Side side = parse_side(side_s);
            auto r = orbit_residues(gs, parse_vec64(start_s), modulus, side);
            if (fmt == Format::Json) {
                ojson j = envelope();
                j["gens"] = gs.label();
                j["start"] = start_s;
                j["side"] = side_name(side);
                j["modulus"] = modulus;
                j["residues"] = r;
                out << j.dump(2) << '\n';
            } else if (fmt == Format::Csv) {
                out << "residue\n";
                for (auto v : r) {
                    out << v << '\n';
                }
            } else {
                out << join(r, " ") << '\n';
            }
        } else if (name == "member") {
            auto gs = GeneratorSet::parse(gens_s);
            const bool r = pullback_membership(gs, parse_vec64(start_s), parse_vec64(target_s));
            if (fmt == Format::Json) {
                ojson j = envelope();
                j["gens"] = gs.label();
                j["start"] = start_s;
                j["target"] = target_s;
                j["member"] = r;
                out << j.dump(2) << '\n';
            } else if (fmt == Format::Csv) {
                out << "start,target,member\n" << start_s << ',' << target_s << ',' << bool_str(r) << '\n';
            } else {
                out << bool_str(r) << '\n';
            }
        } else if (name == "fwindow") {
            WindowResult w = f_of_n(parse_u64(s1));
            if (fmt == Format::Json) {
                ojson j = envelope();
                j["n"] = w.n;
                j["f"] = w.f;
                j["worst_window_start"] = w.worst_window_start;
                out << j.dump(2) << '\n';
            } else if (fmt == Format::Csv) {
                out << "n,f,worst_window_start\n" << w.n << ',' << w.f << ',' << w.worst_window_start << '\n';
            } else {
                out << w.f << '\n';
            }
        } else if (name == "fwindow-verify") {
            const std::uint64_t a = std::max<std::uint64_t>(3, parse_u64(from_s)), b = parse_u64(to_s);
            if (b < a) {
                throw UsageError("--to must be at least --from (and 3)");
            }
            ExecPolicy pol = ctx.policy("fwindow-verify");
            ojson rows = ojson::array();
            std::ostringstream csv;
            csv << "n,f,trivial_bound_ok,pv_bound_ok_or_na\n";
            bool all_ok = true;
            for (std::uint64_t n = a; n <= b; ++n) {
                if (is_square(n)) {
                    continue;
                }
                WindowResult w = f_of_n(n);
                std::string triv = "na", pv = "na";
                if (n % 2 == 1 && n >= 5) {
                    triv = bool_str(w.f <= n - 1);
                }
                if (n >= kPvMinimum && n % 4 != 2) {
                    pv = bool_str(static_cast<double>(w.f) <= pv_bound(n));
                }
                all_ok = all_ok && triv != "false" && pv != "false";
                csv << n << ',' << w.f << ',' << triv << ',' << pv << '\n';
                rows.push_back({{"n", n}, {"f", w.f}, {"trivial_bound_ok", triv}, {"pv_bound_ok_or_na", pv}});
                pol.report(n - a + 1, b - a + 1);
            }
            if (fmt == Format::Json) {
                ojson j = envelope();
                j["from"] = a;
                j["to"] = b;
                j["all_ok"] = all_ok;
                j["rows"] = rows;
                out << j.dump(2) << '\n';
            } else {
                out << csv.str();
            }
        } else if (name == "cfsearch") {
            if (!witness_s.empty()) {
                const std::uint64_t v = parse_u64(witness_s);
                auto c = find_certificate(v);
                if (fmt == Format::Json) {
                    ojson j = envelope();
                    j["denominator"] = v;
                    j["certificate"] = c ? ojson(c->str()) : ojson(nullptr);
                    out << j.dump(2) << '\n';
                } else {
                    out << (c ? c->str() : std::string("none")) << '\n';
                }
                return kOk;
            }
            CfSearchOptions opts;
            opts.policy = ctx.policy("cfsearch");
            opts.checkpoint = checkpoint;
            opts.max_roots = max_roots;
            const std::uint64_t bound = parse_u64(bound_s);
            SearchManifest m = checkpoint.empty() ? search_missing_denominators(bound, opts)
                                                  : checkpoint_resume(checkpoint, bound, opts);
            const std::string js = manifest_json(m);
            if (!out_path.empty()) {
                write_file(out_path, js + "\n");
            }
            if (fmt == Format::Json) {
                out << js << '\n';
            } else {
                if (fmt == Format::Plain && !m.complete) {
                    out << "# partial: " << m.roots_completed << "/" << m.roots_total << " roots\n";
                }
                out << "d_mod_4,total_missing,largest_missing,squares_missing\n";
                for (int r = 0; r < 4; ++r) {
                    const auto& c = m.classes[r];
                    out << r << ',' << c.missing << ',' << c.largest_missing << ',' << c.squares_missing << '\n';
                }
            }
        } else if (name == "hdim") {
            auto gs = GeneratorSet::parse(gens_s);
            auto series = orbit_count(gs, parse_vec64(start_s), default_thresholds(parse_u64(nmax_s), points),
                                      ctx.policy("hdim"));
            DimensionEstimate e = estimate_dimension(series, drop);
            if (fmt == Format::Json) {
                ojson j = envelope();
                j["gens"] = gs.label();
                j["start"] = start_s;
                j["delta"] = e.delta;
                j["stderr"] = e.stderr_delta;
                j["r_squared"] = e.r_squared;
                j["points_used"] = e.points_used;
                j["note"] = e.note;
                j["series"] = ojson::array();
                for (std::size_t i = 0; i < series.thresholds.size(); ++i) {
                    j["series"].push_back({{"N", series.thresholds[i]}, {"count", series.counts[i]}});
                }
                out << j.dump(2) << '\n';
            } else {
                out.precision(6);
                out << "# delta=" << std::fixed << e.delta << " stderr=" << e.stderr_delta << " r_squared=" << e.r_squared
                    << " (" << e.note << ")\n";
                out.unsetf(std::ios::floatfield);
                out << "N,count\n";
                for (std::size_t i = 0; i < series.thresholds.size(); ++i) {
                    out << series.thresholds[i] << ',' << static_cast<std::uint64_t>(series.counts[i]) << '\n';
                }
            }
        } else if (name == "verify-all") {
            VerifyOptions vo;
            vo.quick = quick;
            vo.seed = g.seed;
            vo.policy.threads = g.threads;
            std::stringstream ss(only_s);
            for (std::string tok; std::getline(ss, tok, ',');) {
                if (!tok.empty()) {
                    int id = std::stoi(tok);
                    if (id < 1 || id > kCriterionCount) {
                        throw UsageError("criterion ids run from 1 to " + std::to_string(kCriterionCount));
                    }
                    vo.only.push_back(id);
                }
            }
            VerifyReport rep;
            rep.quick = vo.quick;
            rep.seed = vo.seed;
            for (int id = 1; id <= kCriterionCount; ++id) {
                if (!vo.only.empty() && std::find(vo.only.begin(), vo.only.end(), id) == vo.only.end()) {
                    continue;
                }
                rep.results.push_back(run_criterion(id, vo));
                const auto& r = rep.results.back();
                err << "[" << id << "] " << (r.pass ? "pass" : "FAIL") << " (" << r.seconds << " s)\n" << std::flush;
            }
            if (fmt == Format::Json) {
                out << rep.json() << '\n';
            } else if (fmt == Format::Csv) {
                out << "id,name,pass,detail\n";
                for (const auto& r : rep.results) {
                    out << r.id << ",\"" << r.name << "\"," << bool_str(r.pass) << ",\"" << r.detail << "\"\n";
                }
            } else {
                for (const auto& r : rep.results) {
                    out << (r.pass ? "PASS " : "FAIL ") << r.id << " " << r.name << ": " << r.detail << '\n';
                }
            }
            for (const auto& r : rep.results) {
                if (!r.pass) {
                    err << "failed criterion " << r.id << ": " << r.name << '\n';
                }
            }
            return rep.all_pass() ? kOk : kDomainError;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    } catch (const std::overflow_error& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    }
    return kOk;
}

} // namespace semiorbit::cli
