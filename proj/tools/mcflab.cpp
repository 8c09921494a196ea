// mcflab: command-line laboratory for the n-dimensional triangle map family.
//
// Conventions used by every subcommand:
//   * fast digits are b = floor((1 - x_1)/x_n), indexed from the start point;
//   * slow bits encode fast digit b as the block 1^b 0;
//   * a "zero block" is n-1 consecutive zero digits, the cell-contraction event;
//   * points are comma-separated coordinates, decimal (0.7) or exact (7/10);
//     slash rationals switch the run to exact arithmetic unless --float is given.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <thread>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcf/mcf.hpp"
#include "mcf/serialize.hpp"

using namespace mcf;

namespace {

struct GlobalOpts {
    std::uint64_t seed = 42;
    std::string format = "json";
    std::string output;
};

void emit(const GlobalOpts& g, const std::string& payload) {
    if (g.output.empty()) {
        std::cout << payload << "\n";
        return;
    }
    std::ofstream out(g.output);
    if (!out) throw ParseError("cannot open output file: " + g.output);
    out << payload << "\n";
}

std::vector<Rational> parse_point(const std::string& text, bool* saw_rational) {
    std::vector<Rational> coords;
    std::string token;
    std::string body = text + ",";
    for (char ch : body) {
        if (ch == ',') {
            if (token.empty()) throw ParseError("empty coordinate in point: " + text);
            if (token.find('/') != std::string::npos && saw_rational) *saw_rational = true;
            coords.push_back(parse_rational(token));
            token.clear();
        } else {
            token += ch;
        }
    }
    return coords;
}

std::vector<long long> parse_int_list(const std::string& text) {
    std::vector<long long> out;
    std::string token;
    for (char ch : text + ",") {
        if (ch == ',') {
            if (token.empty()) throw ParseError("empty entry in list: " + text);
            out.push_back(std::stoll(token));
            token.clear();
        } else {
            token += ch;
        }
    }
    return out;
}

Region parse_region(const std::string& text, int n) {
    if (text.rfind("digit:", 0) == 0) return DigitRegion{std::stoll(text.substr(6))};
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ParseError("region must be digit:B or lo1,..,lon:hi1,..,hin");
    BoxRegion box;
    for (const Rational& q : parse_point(text.substr(0, colon), nullptr))
        box.lo.push_back(q.get_d());
    for (const Rational& q : parse_point(text.substr(colon + 1), nullptr))
        box.hi.push_back(q.get_d());
    if (static_cast<int>(box.lo.size()) != n || static_cast<int>(box.hi.size()) != n)
        throw ParseError("region bounds must have n coordinates");
    return box;
}

std::string region_name(const Region& r) {
    if (std::holds_alternative<DigitRegion>(r))
        return "digit:" + std::to_string(std::get<DigitRegion>(r).b);
    const BoxRegion& box = std::get<BoxRegion>(r);
    std::string s = "box ";
    for (std::size_t i = 0; i < box.lo.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s[%g,%g)", i ? "x" : "", box.lo[i], box.hi[i]);
        s += buf;
    }
    return s;
}

template <class S>
Json orbit_json(int n, Flavor flavor, const SimplexPoint<S>& x0, int steps) {
    Json j;
    j["schema"] = schema_version;
    j["n"] = n;
    j["flavor"] = flavor == Flavor::Fast ? "fast" : "slow";
    j["exact"] = scalar_traits<S>::exact;
    auto point_json = [](const SimplexPoint<S>& p) {
        Json arr = Json::array();
        for (const S& c : p.coords) {
            if constexpr (scalar_traits<S>::exact)
                arr.push_back(c.get_str());
            else
                arr.push_back(c);
        }
        return arr;
    };
    Json pts = Json::array();
    if (flavor == Flavor::Fast) {
        FastOrbit<S> orb = orbit_fast(x0, steps);
        j["digits"] = orb.digits.digits;
        j["terminated"] = orb.digits.terminated;
        for (const auto& p : orb.points) pts.push_back(point_json(p));
    } else {
        SlowOrbit<S> orb = orbit_slow(x0, steps);
        j["bits"] = orb.bits.bits;
        j["terminated"] = orb.bits.terminated;
        for (const auto& p : orb.points) pts.push_back(point_json(p));
    }
    j["points"] = std::move(pts);
    return j;
}

int run(int argc, char** argv) {
    CLI::App app{"laboratory for the n-dimensional triangle map family"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand
    GlobalOpts g;
    if (const char* env = std::getenv("MCF_SEED")) g.seed = std::strtoull(env, nullptr, 10);
    app.add_option("--seed", g.seed, "RNG seed (default 42; env MCF_SEED overrides)")
        ->capture_default_str();
    app.add_option("--format", g.format, "output format: json|csv|plain")
        ->check(CLI::IsMember({"json", "csv", "plain"}))
        ->capture_default_str();
    app.add_option("--output", g.output, "write payload to a file instead of stdout");

    // ---- orbit ----
    auto* orbit_cmd = app.add_subcommand(
        "orbit", "iterate the fast or slow map, recording digits/bits and iterates");
    int orbit_n = 2;
    std::string orbit_point;
    bool orbit_random = false, orbit_exact = false, orbit_float = false;
    int orbit_steps = 10;
    std::string orbit_flavor = "fast";
    orbit_cmd->add_option("-n", orbit_n, "dimension (n >= 1)")->required();
    orbit_cmd->add_option("--point", orbit_point,
                          "start point, e.g. 0.7,0.2 or 7/10,2/10 (rationals imply --exact)");
    orbit_cmd->add_flag("--random", orbit_random, "draw the start point uniformly from the simplex");
    orbit_cmd->add_option("--steps", orbit_steps, "maximum number of steps")
        ->capture_default_str();
    orbit_cmd->add_option("--flavor", orbit_flavor, "fast (digit map) or slow (bit map)")
        ->check(CLI::IsMember({"fast", "slow"}))
        ->capture_default_str();
    orbit_cmd->add_flag("--exact", orbit_exact, "force exact rational arithmetic");
    orbit_cmd->add_flag("--float", orbit_float, "force double arithmetic");

    // ---- cell ----
    auto* cell_cmd = app.add_subcommand(
        "cell", "exact cylinder cell for a digit prefix: vertices, norms, det, diameter, weight");
    int cell_n = 2;
    std::vector<long long> cell_digits;
    cell_cmd->add_option("-n", cell_n, "dimension")->required();
    cell_cmd->add_option("digits", cell_digits, "digit prefix b_0 b_1 ... (may be empty)");

    // ---- identity ----
    auto* id_cmd = app.add_subcommand(
        "identity", "verify the partial-fraction (pf) or signed-multinomial tree identity");
    std::string id_which = "tree";
    int id_n = 4, id_k = 0, id_sweep = 0;
    std::string id_x = "1", id_y = "1";
    id_cmd->add_option("--which", id_which, "pf|tree")->check(CLI::IsMember({"pf", "tree"}));
    id_cmd->add_option("-n", id_n, "identity size parameter");
    id_cmd->add_option("-k", id_k, "tree prefix depth (0 <= k <= n)");
    id_cmd->add_option("--x", id_x, "pf: rational x");
    id_cmd->add_option("--y", id_y, "pf: rational y");
    id_cmd->add_option("--sweep", id_sweep,
                       "exhaustively verify all sizes up to N (pf: 200 random pairs each)");

    // ---- measure ----
    auto* measure_cmd = app.add_subcommand(
        "measure", "invariant-measure laboratory: constants, fixed points, ergodic averages");
    int mc_constant = 0, mfix = 0, mbirk_n = 0;
    std::string m_method = "all";
    long m_samples = 10000000;
    int m_points = 100;
    long m_steps = 1000000;
    int m_seeds = 1, m_workers = 4;
    std::vector<std::string> m_regions;
    measure_cmd->add_option("--constant", mc_constant, "normalizing constant for dimension n");
    measure_cmd->add_option("--method", m_method, "series|quadrature|closed|all")
        ->check(CLI::IsMember({"series", "quadrature", "closed", "all"}));
    measure_cmd->add_option("--samples", m_samples, "Monte Carlo samples")->capture_default_str();
    measure_cmd->add_option("--fixed-point", mfix,
                            "max transfer-operator residual of the invariant density, dimension n");
    measure_cmd->add_option("--points", m_points, "number of test points")->capture_default_str();
    measure_cmd->add_option("--birkhoff", mbirk_n, "time vs space averages, dimension n");
    measure_cmd->add_option("--region", m_regions,
                            "region (repeatable): digit:B or lo1,..:hi1,..");
    measure_cmd->add_option("--steps", m_steps, "orbit length for --birkhoff")
        ->capture_default_str();
    measure_cmd->add_option("--seeds", m_seeds, "number of independent orbits for --birkhoff")
        ->capture_default_str();
    measure_cmd->add_option("--workers", m_workers, "worker threads for --birkhoff")
        ->capture_default_str();

    // ---- certify ----
    auto* cert_cmd = app.add_subcommand(
        "certify", "algebraic certificate for a purely periodic digit sequence");
    int cert_n = 1;
    std::string cert_period;
    cert_cmd->add_option("-n", cert_n, "dimension")->required();
    cert_cmd->add_option("--period", cert_period, "comma-separated period digits")->required();

    // ---- survey ----
    auto* survey_cmd = app.add_subcommand(
        "survey", "Monte Carlo digit statistics and zero-block prevalence");
    SurveyParams sp;
    survey_cmd->add_option("-n", sp.n, "dimension")->required();
    survey_cmd->add_option("--samples", sp.samples, "number of random orbits")
        ->capture_default_str();
    survey_cmd->add_option("--orbit-length", sp.orbit_length, "digits per orbit")
        ->capture_default_str();
    survey_cmd->add_option("--bound", sp.bound, "window digit bound B")->capture_default_str();
    survey_cmd->add_option("--block-length", sp.block_length, "block length (default n-1)");
    survey_cmd->add_option("--workers", sp.workers, "worker threads")->capture_default_str();

    // ---- convert ----
    auto* conv_cmd = app.add_subcommand(
        "convert", "translate between fast digits and slow bits (digit b <-> block 1^b 0)");
    std::string conv_digits, conv_bits;
    conv_cmd->add_option("--digits", conv_digits, "fast digits, e.g. 3,4,1,1,3");
    conv_cmd->add_option("--bits", conv_bits, "slow bits ending in 0, e.g. 1,1,0");

    CLI11_PARSE(app, argc, argv);

    if (orbit_cmd->parsed()) {
        Flavor flavor = orbit_flavor == "fast" ? Flavor::Fast : Flavor::Slow;
        bool saw_rational = false;
        std::vector<Rational> coords;
        if (!orbit_point.empty()) {
            coords = parse_point(orbit_point, &saw_rational);
        } else if (orbit_random) {
            SplitMix64 rng(g.seed, 1);
            for (double c : sample_ordered_simplex(orbit_n, rng)) coords.push_back(Rational(c));
        } else {
            throw ParseError("orbit needs --point or --random");
        }
        if (static_cast<int>(coords.size()) != orbit_n)
            throw ParseError("point has wrong dimension");
        bool exact = orbit_exact || (saw_rational && !orbit_float);
        Json j;
        if (exact) {
            j = orbit_json(orbit_n, flavor, make_simplex_point(coords), orbit_steps);
        } else {
            std::vector<double> c;
            for (const Rational& q : coords) c.push_back(q.get_d());
            j = orbit_json(orbit_n, flavor, make_simplex_point(c), orbit_steps);
        }
        if (g.format == "plain") {
            std::string line;
            for (const auto& d : j.contains("digits") ? j["digits"] : j["bits"])
                line += d.dump() + " ";
            line += j["terminated"].get<bool>() ? "(terminated)" : "";
            emit(g, line);
        } else {
            emit(g, j.dump());
        }
        return 0;
    }

    if (cell_cmd->parsed()) {
        Cell c = cell_from_sequence(cell_n, cell_digits);
        Json j = cell_to_json(c);
        Json norms = Json::array();
        for (const BigInt& v : cell_norms(c)) norms.push_back(v.get_str());
        j["norms"] = std::move(norms);
        j["det"] = cell_determinant(c).get_str();
        j["diameter"] = cell_diameter(c);
        j["volume_weight"] = volume_weight(c).get_str();
        emit(g, j.dump());
        return 0;
    }

    if (id_cmd->parsed()) {
        if (id_sweep > 0) {
            long checked = 0;
            SplitMix64 rng(g.seed, 17);
            if (id_which == "pf") {
                for (int n = 2; n <= id_sweep; ++n)
                    for (int rep = 0; rep < 200; ++rep) {
                        Rational x(1 + static_cast<long>(rng.next_below(50)),
                                   1 + static_cast<long>(rng.next_below(50)));
                        Rational y(1 + static_cast<long>(rng.next_below(50)),
                                   1 + static_cast<long>(rng.next_below(50)));
                        x.canonicalize();
                        y.canonicalize();
                        auto [lhs, rhs] = partial_fraction_sides(n, x, y);
                        if (lhs != rhs) {
                            std::cerr << "mismatch at n=" << n << "\n";
                            return 1;
                        }
                        ++checked;
                    }
            } else {
                for (int n = 0; n <= id_sweep; ++n)
                    for (int k = 0; k <= n; ++k) {
                        BigInt expect = binomial(n, k);
                        if (k % 2 == 1) expect = -expect;
                        if (tree_prefix_sum(n, k) != expect) {
                            std::cerr << "mismatch at n=" << n << " k=" << k << "\n";
                            return 1;
                        }
                        ++checked;
                    }
            }
            Json j{{"schema", schema_version}, {"which", id_which}, {"sweep", id_sweep},
                   {"checked", checked}, {"equal", true}};
            emit(g, j.dump());
            return 0;
        }
        Json j;
        j["schema"] = schema_version;
        j["which"] = id_which;
        j["n"] = id_n;
        if (id_which == "tree") {
            j["k"] = id_k;
            BigInt lhs = tree_prefix_sum(id_n, id_k);
            BigInt rhs = binomial(id_n, id_k);
            if (id_k % 2 == 1) rhs = -rhs;
            j["lhs"] = lhs.get_str();
            j["rhs"] = rhs.get_str();
            j["equal"] = lhs == rhs;
        } else {
            Rational x = parse_rational(id_x), y = parse_rational(id_y);
            auto [lhs, rhs] = partial_fraction_sides(id_n, x, y);
            j["x"] = x.get_str();
            j["y"] = y.get_str();
            j["lhs"] = lhs.get_str();
            j["rhs"] = rhs.get_str();
            j["equal"] = lhs == rhs;
        }
        emit(g, j.dump());
        return j["equal"].get<bool>() ? 0 : 1;
    }

    if (measure_cmd->parsed()) {
        Json j;
        j["schema"] = schema_version;
        if (mc_constant > 0) {
            const int n = mc_constant;
            j["n"] = n;
            if (m_method == "closed" || m_method == "all")
                j["closed_form"] = normalizing_constant_closed_form(n);
            if (m_method == "series" || m_method == "all")
                j["series"] = normalizing_constant_series(n);
            if (m_method == "quadrature" || m_method == "all") {
                McEstimate mc = normalizing_constant_quadrature(n, m_samples, g.seed);
                j["quadrature"] = {{"value", mc.value},
                                   {"std_error", mc.std_error},
                                   {"samples", mc.samples}};
            }
        } else if (mfix > 0) {
            const int n = mfix;
            j["n"] = n;
            SplitMix64 rng(g.seed, 3);
            DensityKind kind{Flavor::Fast, n};
            auto f = [&](const SimplexPoint<double>& y) { return density(kind, y); };
            double worst = 0.0;
            for (int rep = 0; rep < m_points; ++rep) {
                std::vector<double> x;
                do {
                    x = sample_ordered_simplex(n, rng);
                } while (x[n - 1] < 0.01 || x[0] > 1 - 1e-3);
                SimplexPoint<double> p(x);
                double fx = density(kind, p);
                worst = std::max(worst, std::fabs(transfer_apply_fast(f, p, 1e-10) - fx) / fx);
            }
            j["points"] = m_points;
            j["max_rel_residual"] = worst;
            // slow-map fixed point is exact in rational arithmetic
            DensityKind slow{Flavor::Slow, n};
            auto fs = [&](const SimplexPoint<Rational>& y) { return density(slow, y); };
            bool exact_ok = true;
            for (int rep = 0; rep < 20 && exact_ok; ++rep) {
                std::vector<Rational> c(n);
                long base = 3 + static_cast<long>(rng.next_below(50));
                for (int i = 0; i < n; ++i) {
                    c[i] = Rational(base + static_cast<long>(rng.next_below(40)) * (n - i), 211);
                    c[i].canonicalize();
                }
                std::sort(c.begin(), c.end(), std::greater<Rational>());
                SimplexPoint<Rational> p(c);
                exact_ok = transfer_apply_slow(fs, p) == density(slow, p);
            }
            j["slow_exact_fixed_point"] = exact_ok;
        } else if (mbirk_n > 0) {
            const int n = mbirk_n;
            j["n"] = n;
            std::vector<Region> regions;
            for (const std::string& spec : m_regions) regions.push_back(parse_region(spec, n));
            if (regions.empty()) regions.push_back(DigitRegion{0});
            // one orbit per seed, farmed out to a worker pool, merged in seed order
            std::vector<BirkhoffResult> results(m_seeds);
            {
                std::vector<std::thread> pool;
                std::atomic<int> next{0};
                const int workers = std::max(1, std::min(m_workers, m_seeds));
                for (int w = 0; w < workers; ++w)
                    pool.emplace_back([&] {
                        for (int i = next.fetch_add(1); i < m_seeds; i = next.fetch_add(1))
                            results[i] = birkhoff_averages(n, regions, m_steps,
                                                           g.seed + static_cast<std::uint64_t>(i));
                    });
                for (auto& th : pool) th.join();
            }
            Json arr = Json::array();
            long restarts = 0;
            for (std::size_t i = 0; i < regions.size(); ++i) {
                double mean = 0.0, worst = 0.0;
                Json per_seed = Json::array();
                for (const BirkhoffResult& r : results) {
                    per_seed.push_back(r.time_averages[i]);
                    mean += r.time_averages[i];
                    worst = std::max(worst,
                                     std::fabs(r.time_averages[i] - r.space_averages[i]));
                }
                mean /= static_cast<double>(m_seeds);
                arr.push_back({{"region", region_name(regions[i])},
                               {"time_average", mean},
                               {"space_average", results[0].space_averages[i]},
                               {"abs_error", std::fabs(mean - results[0].space_averages[i])},
                               {"worst_abs_error", worst},
                               {"per_seed", std::move(per_seed)}});
            }
            for (const BirkhoffResult& r : results) restarts += r.restarts;
            j["steps"] = m_steps;
            j["seed"] = g.seed;
            j["seeds"] = m_seeds;
            j["birkhoff_estimates"] = std::move(arr);
            j["restarts"] = restarts;
        } else {
            throw ParseError("measure needs --constant, --fixed-point, or --birkhoff");
        }
        emit(g, j.dump());
        return 0;
    }

    if (cert_cmd->parsed()) {
        auto cert = certify_periodic(cert_n, parse_int_list(cert_period));
        emit(g, certificate_to_json(cert).dump());
        return 0;
    }

    if (survey_cmd->parsed()) {
        sp.seed = g.seed;
        ErgodicReport r = zero_block_survey(sp);
        if (g.format == "csv")
            emit(g, report_to_csv(r));
        else
            emit(g, report_to_json(r).dump());
        return 0;
    }

    if (conv_cmd->parsed()) {
        Json j;
        j["schema"] = schema_version;
        if (!conv_digits.empty()) {
            DigitSequence d;
            d.digits = parse_int_list(conv_digits);
            j["digits"] = d.digits;
            j["bits"] = fast_to_slow(d).bits;
        } else if (!conv_bits.empty()) {
            BitSequence b;
            for (long long v : parse_int_list(conv_bits)) {
                if (v != 0 && v != 1) throw ParseError("bits must be 0 or 1");
                b.bits.push_back(static_cast<int>(v));
            }
            j["bits"] = b.bits;
            j["digits"] = slow_to_fast(b).digits;
        } else {
            throw ParseError("convert needs --digits or --bits");
        }
        emit(g, j.dump());
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        Json err{{"schema", schema_version},
                 {"error", {{"type", e.type}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        Json err{{"schema", schema_version},
                 {"error", {{"type", "InternalError"}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
}
