// Command line front end: quantizer design, rate sweeps, optimality checks,
// fusion error tables, and Monte Carlo validation for binary sensor networks.
#include <CLI11.hpp>
#include <json.hpp>

#include <ratebal/conditions.hpp>
#include <ratebal/errors.hpp>
#include <ratebal/models.hpp>
#include <ratebal/montecarlo.hpp>
#include <ratebal/network.hpp>
#include <ratebal/quantizer.hpp>
#include <ratebal/version.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace {

using nlohmann::json;
using namespace ratebal;

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

// "v", "lo:hi" (21 points) or "lo:hi:points"
std::vector<double> parse_linear_grid(const std::string& spec) {
    auto parts = split(spec, ':');
    if (parts.empty() || parts.size() > 3)
        throw std::invalid_argument("grid spec must look like lo:hi[:points]");
    if (parts.size() == 1) return {std::stod(parts[0])};
    double lo = std::stod(parts[0]), hi = std::stod(parts[1]);
    long points = parts.size() == 3 ? std::stol(parts[2]) : 21;
    if (points < 1 || points > 100000) throw std::invalid_argument("grid needs 1 to 100000 points");
    if (points == 1) {
        if (lo != hi) throw std::invalid_argument("a single-point grid needs lo == hi");
        return {lo};
    }
    std::vector<double> out(points);
    for (long i = 0; i < points; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    return out;
}

std::vector<unsigned> parse_rates(const std::string& spec, char sep = ',') {
    std::vector<unsigned> rates;
    for (const auto& tok : split(spec, sep)) {
        long v = std::stol(tok);
        if (v < 0 || v > 30) throw std::invalid_argument("per-sensor rates must be in [0, 30]");
        rates.push_back(static_cast<unsigned>(v));
    }
    return rates;
}

std::string alloc_label(const std::vector<unsigned>& rates) {
    std::string label;
    for (unsigned r : rates) {
        if (!label.empty()) label += '-';
        label += std::to_string(r);
    }
    return label;
}

// Rows keyed by column name; CSV keeps the declared column order, JSON emits
// an array of objects. Doubles print as %.12g in CSV.
class Table {
  public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add(const json& row) { rows_.push_back(row); }

    std::string csv() const {
        std::string text;
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (i) text += ',';
            text += columns_[i];
        }
        text += '\n';
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < columns_.size(); ++i) {
                if (i) text += ',';
                const json& v = row.at(columns_[i]);
                if (v.is_number_float())
                    text += fmt_g(v.get<double>());
                else if (v.is_string())
                    text += v.get<std::string>();
                else
                    text += v.dump();
            }
            text += '\n';
        }
        return text;
    }

    std::string as_json() const { return json(rows_).dump(2) + "\n"; }

    std::string render(const std::string& format) const {
        if (format == "csv") return csv();
        if (format == "json") return as_json();
        throw std::invalid_argument("format must be csv or json");
    }

    std::size_t rows() const { return rows_.size(); }

  private:
    std::vector<std::string> columns_;
    std::vector<json> rows_;
};

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + path);
    f << text;
}

// A small provenance record next to every file output.
void write_manifest(const std::string& path, const std::string& command, const json& params) {
    if (path.empty()) return;
    json manifest{{"command", command},
                  {"version", std::string(kVersion)},
                  {"parameters", params},
                  {"outputs", json::array({path})}};
    std::ofstream f(path + ".manifest.json", std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open manifest file: " + path + ".manifest.json");
    f << manifest.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Design cache: dedupes repeated designs inside one run and, when
// RATEBAL_CACHE_DIR is set, persists them across runs keyed by the exact
// model, rate, and search configuration.

struct DesignKey {
    int kind = 0;
    std::uint64_t m_bits = 0;
    unsigned rate = 0;
    unsigned restarts = 0;
    std::uint64_t seed = 0;
    std::uint64_t tol_bits = 0;

    auto tie() const { return std::tie(kind, m_bits, rate, restarts, seed, tol_bits); }
    bool operator<(const DesignKey& o) const { return tie() < o.tie(); }
};

std::string key_digest(const DesignKey& k) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    mix(static_cast<std::uint64_t>(k.kind));
    mix(k.m_bits);
    mix(k.rate);
    mix(k.restarts);
    mix(k.seed);
    mix(k.tol_bits);
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

class DesignCache {
  public:
    explicit DesignCache(const DesignConfig& cfg) : cfg_(cfg) {
        if (const char* dir = std::getenv("RATEBAL_CACHE_DIR"); dir && *dir) dir_ = dir;
    }

    DesignResult get(NoiseKind kind, double m, unsigned rate) {
        return get_all(kind, {{m, rate}}, 1).front();
    }

    // Designs every (m, rate) job, reusing duplicates and fanning cache
    // misses out over worker threads.
    std::vector<DesignResult> get_all(NoiseKind kind,
                                      const std::vector<std::pair<double, unsigned>>& jobs,
                                      unsigned workers) {
        std::map<DesignKey, DesignResult> ready;
        std::vector<std::pair<DesignKey, std::pair<double, unsigned>>> missing;
        for (const auto& [m, rate] : jobs) {
            DesignKey key = make_key(kind, m, rate);
            if (ready.count(key)) continue;
            if (auto it = mem_.find(key); it != mem_.end()) {
                ready.emplace(key, it->second);
            } else if (auto hit = load(key, kind, rate)) {
                ready.emplace(key, *hit);
                mem_.emplace(key, *hit);
            } else if (std::none_of(missing.begin(), missing.end(),
                                    [&](const auto& p) { return !(p.first < key) && !(key < p.first); })) {
                missing.push_back({key, {m, rate}});
            }
        }

        if (!missing.empty()) {
            std::vector<DesignResult> computed(missing.size());
            auto compute = [&](std::size_t i) {
                const auto& [m, rate] = missing[i].second;
                computed[i] = design_coordinate_descent(make_model(kind, m), rate, cfg_);
            };
            unsigned n = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(missing.size()));
            if (n == 1) {
                for (std::size_t i = 0; i < missing.size(); ++i) compute(i);
            } else {
                std::vector<std::future<void>> parts;
                for (unsigned w = 0; w < n; ++w)
                    parts.push_back(std::async(std::launch::async, [&, w] {
                        for (std::size_t i = w; i < missing.size(); i += n) compute(i);
                    }));
                for (auto& p : parts) p.get();
            }
            for (std::size_t i = 0; i < missing.size(); ++i) {
                ready.emplace(missing[i].first, computed[i]);
                mem_.emplace(missing[i].first, computed[i]);
                store(missing[i].first, kind, missing[i].second.first, computed[i]);
            }
        }

        std::vector<DesignResult> out;
        out.reserve(jobs.size());
        for (const auto& [m, rate] : jobs) out.push_back(ready.at(make_key(kind, m, rate)));
        return out;
    }

  private:
    DesignKey make_key(NoiseKind kind, double m, unsigned rate) const {
        return {static_cast<int>(kind), std::bit_cast<std::uint64_t>(m), rate,
                cfg_.restarts, cfg_.seed, std::bit_cast<std::uint64_t>(cfg_.pass_tolerance)};
    }

    std::optional<DesignResult> load(const DesignKey& key, NoiseKind kind, unsigned rate) const {
        if (dir_.empty()) return std::nullopt;
        std::ifstream f(dir_ / ("ratebal-" + key_digest(key) + ".json"));
        if (!f) return std::nullopt;
        try {
            json j = json::parse(f);
            if (j.at("model").get<std::string>() != to_string(kind) ||
                std::bit_cast<std::uint64_t>(j.at("m").get<double>()) != key.m_bits ||
                j.at("rate").get<unsigned>() != rate ||
                j.at("restarts").get<unsigned>() != cfg_.restarts ||
                j.at("seed").get<std::uint64_t>() != cfg_.seed)
                return std::nullopt;
            DesignResult r;
            r.quantizer.rate = rate;
            r.quantizer.thresholds = j.at("thresholds").get<std::vector<double>>();
            r.bhattacharyya = j.at("bhattacharyya").get<double>();
            require_valid(r.quantizer);
            return r;
        } catch (const std::exception&) {
            return std::nullopt;  // stale or foreign file, recompute
        }
    }

    void store(const DesignKey& key, NoiseKind kind, double m, const DesignResult& r) const {
        if (dir_.empty()) return;
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        json j{{"model", to_string(kind)},
               {"m", m},
               {"rate", r.quantizer.rate},
               {"restarts", cfg_.restarts},
               {"seed", cfg_.seed},
               {"pass_tolerance", cfg_.pass_tolerance},
               {"thresholds", r.quantizer.thresholds},
               {"bhattacharyya", r.bhattacharyya}};
        std::ofstream f(dir_ / ("ratebal-" + key_digest(key) + ".json"), std::ios::binary);
        if (f) f << j.dump(2) << "\n";  // a failed cache write is not an error
    }

    DesignConfig cfg_;
    std::map<DesignKey, DesignResult> mem_;
    std::filesystem::path dir_;
};

NetworkDesign assemble(const ObservationModel& model, const std::vector<unsigned>& rates,
                       unsigned cap, const std::vector<DesignResult>& designed) {
    NetworkDesign d;
    d.model = model;
    d.allocation = {rates, cap};
    for (const auto& r : designed) d.quantizers.push_back(r.quantizer);
    return d;
}

// ---------------------------------------------------------------------------
// Subcommand options and runners.

struct DesignOpts {
    std::string model = "laplacian";
    double m = 1.0;
    unsigned rate = 1;
    unsigned restarts = 8;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    std::string out, format = "json";
};

int run_design(const DesignOpts& o) {
    DesignConfig cfg;
    cfg.restarts = o.restarts;
    cfg.seed = o.seed;
    cfg.pass_tolerance = o.tol;
    NoiseKind kind = noise_kind_from_string(o.model);
    ObservationModel model = make_model(kind, o.m);
    DesignCache cache(cfg);
    DesignResult r = cache.get(kind, o.m, o.rate);

    if (o.format != "json") throw std::invalid_argument("design emits json only");
    json params{{"model", o.model}, {"m", o.m},       {"rate", o.rate}, {"restarts", o.restarts},
                {"seed", o.seed},   {"tol", o.tol},   {"format", o.format}};
    json j{{"model", o.model},
           {"m", o.m},
           {"rate", o.rate},
           {"thresholds", r.quantizer.thresholds},
           {"bhattacharyya", r.bhattacharyya},
           {"b_infinity", model.b_infinity()},
           {"beta_asymptotic", beta_asymptotic(model, o.rate)},
           {"restarts", o.restarts},
           {"seed", o.seed}};
    write_output(o.out, j.dump(2) + "\n");
    write_manifest(o.out, "design", params);
    return 0;
}

struct SweepOpts {
    std::string model = "laplacian";
    std::vector<double> m{1.0};
    unsigned max_rate = 5;
    unsigned restarts = 8;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    unsigned workers = 1;
    std::string out, format = "csv";
};

int run_rate_sweep(const SweepOpts& o) {
    DesignConfig cfg;
    cfg.restarts = o.restarts;
    cfg.seed = o.seed;
    cfg.pass_tolerance = o.tol;
    NoiseKind kind = noise_kind_from_string(o.model);
    DesignCache cache(cfg);

    std::vector<std::pair<double, unsigned>> jobs;
    for (double m : o.m)
        for (unsigned r = 0; r <= o.max_rate; ++r) jobs.push_back({m, r});
    std::vector<DesignResult> designed = cache.get_all(kind, jobs, o.workers);

    Table table({"model", "m", "rate", "designed_b", "compander_b", "beta_r", "b_infinity"});
    std::size_t at = 0;
    for (double m : o.m) {
        ObservationModel model = make_model(kind, m);
        for (unsigned r = 0; r <= o.max_rate; ++r, ++at) {
            double comp = r == 0 ? 0.0 : bhattacharyya(cell_pmf(model, design_compander(model, r)));
            table.add(json{{"model", o.model},
                           {"m", m},
                           {"rate", r},
                           {"designed_b", designed[at].bhattacharyya},
                           {"compander_b", comp},
                           {"beta_r", beta_asymptotic(model, r)},
                           {"b_infinity", model.b_infinity()}});
        }
    }
    json params{{"model", o.model},       {"m", o.m},        {"max_rate", o.max_rate},
                {"restarts", o.restarts}, {"seed", o.seed},  {"tol", o.tol},
                {"workers", o.workers},   {"format", o.format}};
    write_output(o.out, table.render(o.format));
    write_manifest(o.out, "rate-sweep", params);
    return 0;
}

struct ScanOpts {
    std::string model = "laplacian";
    std::vector<double> m{0.5, 1.0, 2.0};
    int grid = 100;
    std::string rule = "likelihood";
    std::string out, format = "csv";
};

int run_scan(const ScanOpts& o) {
    NoiseKind kind = noise_kind_from_string(o.model);
    EtaRule rule = eta_rule_from_string(o.rule);

    Table table({"model", "m", "rule", "a_tilde", "c_tilde", "margin"});
    ScanSink sink;
    if (o.format == "csv")
        sink = [&](const ScanCell& c) {
            table.add(json{{"model", o.model},
                           {"m", c.m},
                           {"rule", o.rule},
                           {"a_tilde", c.a_tilde},
                           {"c_tilde", c.c_tilde},
                           {"margin", c.margin}});
        };
    ScanReport rep = scan_conjecture(kind, o.m, o.grid, rule, sink);

    json summary{{"model", o.model},
                 {"rule", o.rule},
                 {"grid", rep.grid},
                 {"m_values", o.m},
                 {"cells", rep.cells},
                 {"skipped", rep.skipped},
                 {"min_margin", rep.min_margin},
                 {"argmin", json{{"m", rep.argmin.m},
                                 {"a_tilde", rep.argmin.a_tilde},
                                 {"c_tilde", rep.argmin.c_tilde}}}};
    json params{{"model", o.model}, {"m", o.m},           {"grid", o.grid},
                {"rule", o.rule},   {"format", o.format}};
    if (o.format == "csv") {
        write_output(o.out, table.csv());
        std::cerr << "scan: " << rep.cells << " cells, min margin " << fmt_g(rep.min_margin)
                  << " at m=" << fmt_g(rep.argmin.m) << "\n";
    } else if (o.format == "json") {
        write_output(o.out, summary.dump(2) + "\n");
    } else {
        throw std::invalid_argument("format must be csv or json");
    }
    write_manifest(o.out, "conjecture-scan", params);
    return 0;
}

struct CurveOpts {
    std::string model = "laplacian";
    std::vector<std::string> rates;
    unsigned sum_rate = 0;  // 0: use the largest allocation total
    std::string snr = "-4:10:8";
    unsigned restarts = 8;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    unsigned workers = 1;
    std::string out, format = "csv";
};

int run_pe_curve(const CurveOpts& o) {
    NoiseKind kind = noise_kind_from_string(o.model);
    std::vector<std::vector<unsigned>> allocations;
    unsigned max_sum = 0;
    for (const auto& spec : o.rates) {
        auto rates = parse_rates(spec);
        RateAllocation a{rates, o.sum_rate ? o.sum_rate : 1000};
        require_valid(a);
        max_sum = std::max(max_sum, a.sum());
        allocations.push_back(std::move(rates));
    }
    if (allocations.empty()) throw std::invalid_argument("pe-curve needs at least one --rates");
    unsigned cap = o.sum_rate ? o.sum_rate : max_sum;
    std::vector<double> snrs = parse_linear_grid(o.snr);

    DesignConfig cfg;
    cfg.restarts = o.restarts;
    cfg.seed = o.seed;
    cfg.pass_tolerance = o.tol;
    DesignCache cache(cfg);
    std::vector<std::pair<double, unsigned>> jobs;
    for (double db : snrs) {
        double m = snr_to_m(kind, db);
        for (const auto& rates : allocations)
            for (unsigned r : rates) jobs.push_back({m, r});
    }
    std::vector<DesignResult> designed = cache.get_all(kind, jobs, o.workers);

    Table table({"model", "snr_db", "m", "allocation", "sum_rate", "network_b", "pe_exact",
                 "pe_bound"});
    std::size_t at = 0;
    for (double db : snrs) {
        double m = snr_to_m(kind, db);
        ObservationModel model = make_model(kind, m);
        for (const auto& rates : allocations) {
            std::vector<DesignResult> parts(designed.begin() + at, designed.begin() + at + rates.size());
            at += rates.size();
            NetworkDesign d = assemble(model, rates, cap, parts);
            double b = network_bhattacharyya(d);
            table.add(json{{"model", o.model},
                           {"snr_db", db},
                           {"m", m},
                           {"allocation", alloc_label(rates)},
                           {"sum_rate", d.allocation.sum()},
                           {"network_b", b},
                           {"pe_exact", analytic_pe(d, Priors{})},
                           {"pe_bound", pe_upper_bound(b, Priors{})}});
        }
    }
    json params{{"model", o.model},  {"rates", o.rates},       {"sum_rate", cap},
                {"snr_db", o.snr},   {"restarts", o.restarts}, {"seed", o.seed},
                {"tol", o.tol},      {"workers", o.workers},   {"format", o.format}};
    write_output(o.out, table.render(o.format));
    write_manifest(o.out, "pe-curve", params);
    return 0;
}

struct DecayOpts {
    std::string model = "laplacian";
    std::string sensors = "2,4,6";
    std::vector<std::string> schemes{"2-2", "3-1", "4-0"};
    double m = 1.0;
    std::string snr;  // optional single point, overrides --m
    unsigned restarts = 8;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    unsigned workers = 1;
    std::string out, format = "csv";
};

int run_pe_decay(const DecayOpts& o) {
    NoiseKind kind = noise_kind_from_string(o.model);
    double m = o.m;
    if (!o.snr.empty()) {
        std::vector<double> pts = parse_linear_grid(o.snr);
        if (pts.size() != 1) throw std::invalid_argument("pe-decay takes a single --snr-db point");
        m = snr_to_m(kind, pts[0]);
    }
    ObservationModel model = make_model(kind, m);

    std::vector<unsigned> counts = parse_rates(o.sensors);
    std::vector<std::pair<unsigned, unsigned>> pairs;
    for (const auto& s : o.schemes) {
        auto parts = parse_rates(s, '-');
        if (parts.size() != 2) throw std::invalid_argument("schemes look like 3-1: two rates per sensor pair");
        pairs.push_back({parts[0], parts[1]});
    }

    DesignConfig cfg;
    cfg.restarts = o.restarts;
    cfg.seed = o.seed;
    cfg.pass_tolerance = o.tol;
    DesignCache cache(cfg);
    std::vector<std::pair<double, unsigned>> jobs;
    for (const auto& [ra, rb] : pairs) {
        jobs.push_back({m, ra});
        jobs.push_back({m, rb});
    }
    std::vector<DesignResult> designed = cache.get_all(kind, jobs, o.workers);

    Table table({"model", "m", "scheme", "sensors", "sum_rate", "network_b", "pe_exact",
                 "pe_bound"});
    for (std::size_t s = 0; s < pairs.size(); ++s) {
        for (unsigned n : counts) {
            if (n == 0 || n % 2 != 0)
                throw std::invalid_argument("paired schemes need positive even sensor counts");
            std::vector<unsigned> rates;
            std::vector<DesignResult> parts;
            for (unsigned i = 0; i < n / 2; ++i) {
                rates.push_back(pairs[s].first);
                parts.push_back(designed[2 * s]);
                rates.push_back(pairs[s].second);
                parts.push_back(designed[2 * s + 1]);
            }
            NetworkDesign d = assemble(model, rates, 0, parts);
            d.allocation.sum_rate_cap = d.allocation.sum();
            double b = network_bhattacharyya(d);
            table.add(json{{"model", o.model},
                           {"m", m},
                           {"scheme", o.schemes[s]},
                           {"sensors", n},
                           {"sum_rate", d.allocation.sum()},
                           {"network_b", b},
                           {"pe_exact", analytic_pe(d, Priors{})},
                           {"pe_bound", pe_upper_bound(b, Priors{})}});
        }
    }
    json params{{"model", o.model},  {"sensors", o.sensors},   {"schemes", o.schemes},
                {"m", m},            {"restarts", o.restarts}, {"seed", o.seed},
                {"tol", o.tol},      {"workers", o.workers},   {"format", o.format}};
    write_output(o.out, table.render(o.format));
    write_manifest(o.out, "pe-decay", params);
    return 0;
}

struct CheckOpts {
    std::string model = "laplacian";
    std::vector<double> m{0.5, 1.0, 2.0};
    int grid = 200;
    std::string rule = "likelihood";
    unsigned max_rate = 5;
    double tol = 1e-6;
    unsigned restarts = 8;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::string out, format = "json";
};

int run_check(const CheckOpts& o) {
    NoiseKind kind = noise_kind_from_string(o.model);
    EtaRule rule = eta_rule_from_string(o.rule);
    if (o.format != "json") throw std::invalid_argument("check emits json only");

    json checks = json::array();
    bool all_pass = true;
    auto record = [&](json entry, bool pass) {
        entry["pass"] = pass;
        checks.push_back(entry);
        all_pass = all_pass && pass;
    };

    // closed-form certificates exist for the laplacian pair
    if (kind == NoiseKind::laplacian) {
        for (double m : o.m) {
            CertificateReport rep = laplacian_certificate(m, o.grid);
            record(json{{"name", "split_certificate"},
                        {"m", m},
                        {"max_violation", rep.max_violation()}},
                   rep.max_violation() <= 1e-12);
        }
    }

    // grid scan of the one-bit split conjecture
    ScanReport scan = scan_conjecture(kind, o.m, o.grid, rule);
    record(json{{"name", "scan_margin"},
                {"cells", scan.cells},
                {"skipped", scan.skipped},
                {"min_margin", scan.min_margin},
                {"argmin_m", scan.argmin.m}},
           scan.min_margin >= -1e-12);

    // designed rate sweeps: monotone, bounded, concave, and tight
    DesignConfig cfg;
    cfg.restarts = o.restarts;
    cfg.seed = o.seed;
    DesignCache cache(cfg);
    std::vector<std::pair<double, unsigned>> jobs;
    for (double m : o.m)
        for (unsigned r = 0; r <= o.max_rate; ++r) jobs.push_back({m, r});
    std::vector<DesignResult> designed = cache.get_all(kind, jobs, o.workers);

    std::size_t at = 0;
    for (double m : o.m) {
        ObservationModel model = make_model(kind, m);
        double b_inf = model.b_infinity();
        std::vector<double> seq;
        for (unsigned r = 0; r <= o.max_rate; ++r, ++at) seq.push_back(designed[at].bhattacharyya);

        bool monotone = true, bounded = true;
        for (std::size_t r = 0; r < seq.size(); ++r) {
            if (r + 1 < seq.size() && seq[r] > seq[r + 1] + 1e-12) monotone = false;
            if (seq[r] > b_inf + 1e-12) bounded = false;
        }
        record(json{{"name", "rate_monotone"}, {"m", m}}, monotone);
        record(json{{"name", "asymptote_bound"}, {"m", m}}, bounded);
        record(json{{"name", "concavity"}, {"m", m}}, concavity_check(seq, o.tol).concave);
        record(json{{"name", "residual_gap"}, {"m", m}},
               residual_gap_check(seq, b_inf, o.tol));

        bool dominates = true;
        for (unsigned r = 1; r <= o.max_rate; ++r) {
            double comp = bhattacharyya(cell_pmf(model, design_compander(model, r)));
            if (seq[r] < comp - 1e-6) dominates = false;
        }
        record(json{{"name", "compander_dominance"}, {"m", m}}, dominates);

        if (o.max_rate >= 3) {
            double worst = 0.0;
            for (unsigned r = 3; r <= o.max_rate; ++r)
                worst = std::max(worst, std::abs(seq[r] - beta_asymptotic(model, r)));
            record(json{{"name", "asymptotic_agreement"}, {"m", m}, {"max_gap", worst}},
                   worst <= 0.02);
        }
    }

    json report{{"model", o.model},
                {"m_values", o.m},
                {"grid", o.grid},
                {"rule", o.rule},
                {"max_rate", o.max_rate},
                {"tolerance", o.tol},
                {"checks", checks},
                {"pass", all_pass}};
    json params{{"model", o.model},       {"m", o.m},       {"grid", o.grid},
                {"rule", o.rule},         {"max_rate", o.max_rate},
                {"tol", o.tol},           {"restarts", o.restarts},
                {"seed", o.seed},         {"workers", o.workers},
                {"format", o.format}};
    write_output(o.out, report.dump(2) + "\n");
    write_manifest(o.out, "check", params);
    return all_pass ? 0 : 1;
}

struct McOpts {
    std::string model = "laplacian";
    double m = 1.0;
    std::string rates = "1,2";
    std::uint64_t trials = 1000000;
    std::uint64_t seed = 0;
    unsigned restarts = 8;
    unsigned workers = 1;
    std::string out, format = "json";
};

int run_mc_validate(const McOpts& o) {
    NoiseKind kind = noise_kind_from_string(o.model);
    ObservationModel model = make_model(kind, o.m);
    std::vector<unsigned> rates = parse_rates(o.rates);
    if (o.format != "json") throw std::invalid_argument("mc-validate emits json only");

    DesignConfig cfg;
    cfg.restarts = o.restarts;
    DesignCache cache(cfg);
    std::vector<std::pair<double, unsigned>> jobs;
    for (unsigned r : rates) jobs.push_back({o.m, r});
    NetworkDesign d = assemble(model, rates, 0, cache.get_all(kind, jobs, o.workers));
    d.allocation.sum_rate_cap = d.allocation.sum();

    double exact = analytic_pe(d, Priors{});
    SimConfig sim;
    sim.trials = o.trials;
    sim.seed = o.seed;
    sim.workers = o.workers;
    SimResult r = simulate_pe(d, Priors{}, sim);

    double diff = r.pe_hat - exact;
    double z = r.std_err > 0.0 ? diff / r.std_err : (diff == 0.0 ? 0.0 : kInf);
    bool pass = std::abs(diff) <= 4.0 * r.std_err + 1e-12;

    json j{{"model", o.model},
           {"m", o.m},
           {"allocation", alloc_label(rates)},
           {"network_b", network_bhattacharyya(d)},
           {"pe_exact", exact},
           {"pe_hat", r.pe_hat},
           {"std_err", r.std_err},
           {"errors", r.errors},
           {"trials", r.trials},
           {"z_score", z},
           {"pass", pass}};
    json params{{"model", o.model},   {"m", o.m},       {"rates", o.rates},
                {"trials", o.trials}, {"seed", o.seed}, {"restarts", o.restarts},
                {"workers", o.workers}, {"format", o.format}};
    write_output(o.out, j.dump(2) + "\n");
    write_manifest(o.out, "mc-validate", params);
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-rate quantizer design and rate balancing for binary sensor networks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));
    auto model_check = CLI::IsMember({"laplacian", "gaussian"});
    auto rule_check = CLI::IsMember({"likelihood", "compander", "midpoint"});
    auto format_check = CLI::IsMember({"csv", "json"});

    int code = 0;

    DesignOpts dopt;
    auto* design = app.add_subcommand("design", "design one sensor quantizer by coordinate descent");
    design->add_option("--model", dopt.model, "noise model")->check(model_check);
    design->add_option("--m", dopt.m, "half separation between hypothesis means")->check(CLI::PositiveNumber);
    design->add_option("--rate", dopt.rate, "quantizer rate in bits")->required();
    design->add_option("--restarts", dopt.restarts, "random restarts");
    design->add_option("--seed", dopt.seed, "search seed");
    design->add_option("--tol", dopt.tol, "descent pass tolerance")->check(CLI::PositiveNumber);
    design->add_option("--out", dopt.out, "output file (default stdout)");
    design->add_option("--format", dopt.format, "output format")->check(format_check);
    design->callback([&] { code = run_design(dopt); });

    SweepOpts sopt;
    auto* sweep = app.add_subcommand("rate-sweep", "designed distance versus rate, next to the compander and asymptote");
    sweep->add_option("--model", sopt.model, "noise model")->check(model_check);
    sweep->add_option("--m", sopt.m, "half separations (repeatable)")->check(CLI::PositiveNumber);
    sweep->add_option("--max-rate", sopt.max_rate, "largest rate in the sweep");
    sweep->add_option("--restarts", sopt.restarts, "random restarts");
    sweep->add_option("--seed", sopt.seed, "search seed");
    sweep->add_option("--tol", sopt.tol, "descent pass tolerance")->check(CLI::PositiveNumber);
    sweep->add_option("--workers", sopt.workers, "design worker threads")->check(CLI::PositiveNumber);
    sweep->add_option("--out", sopt.out, "output file (default stdout)");
    sweep->add_option("--format", sopt.format, "output format")->check(format_check);
    sweep->callback([&] { code = run_rate_sweep(sopt); });

    ScanOpts scopt;
    auto* scan = app.add_subcommand("conjecture-scan", "margins of the one-bit split condition over a logit grid of cells");
    scan->add_option("--model", scopt.model, "noise model")->check(model_check);
    scan->add_option("--m", scopt.m, "half separations (repeatable)")->check(CLI::PositiveNumber);
    scan->add_option("--grid", scopt.grid, "logit grid points per axis")->check(CLI::Range(2, 100000));
    scan->add_option("--eta-rule", scopt.rule, "split point rule")->check(rule_check);
    scan->add_option("--out", scopt.out, "output file (default stdout)");
    scan->add_option("--format", scopt.format, "csv: per-cell rows; json: summary")->check(format_check);
    scan->callback([&] { code = run_scan(scopt); });

    CurveOpts copt;
    auto* curve = app.add_subcommand("pe-curve", "exact fusion error versus SNR for designed allocations");
    curve->add_option("--model", copt.model, "noise model")->check(model_check);
    curve->add_option("--rates", copt.rates, "allocation like 3,3,2,2,1,1 (repeatable)")->required();
    curve->add_option("--sum-rate", copt.sum_rate, "sum-rate budget (default: largest allocation)");
    curve->add_option("--snr-db", copt.snr, "SNR grid lo:hi[:points], default -4:10:8");
    curve->add_option("--restarts", copt.restarts, "random restarts");
    curve->add_option("--seed", copt.seed, "search seed");
    curve->add_option("--tol", copt.tol, "descent pass tolerance")->check(CLI::PositiveNumber);
    curve->add_option("--workers", copt.workers, "design worker threads")->check(CLI::PositiveNumber);
    curve->add_option("--out", copt.out, "output file (default stdout)");
    curve->add_option("--format", copt.format, "output format")->check(format_check);
    curve->callback([&] { code = run_pe_curve(copt); });

    DecayOpts eopt;
    auto* decay = app.add_subcommand("pe-decay", "fusion error versus sensor count for paired rate schemes at two bits per sensor");
    decay->add_option("--model", eopt.model, "noise model")->check(model_check);
    decay->add_option("--sensors", eopt.sensors, "sensor counts like 2,4,6");
    decay->add_option("--schemes", eopt.schemes, "rate pairs like 3-1 (repeatable)");
    decay->add_option("--m", eopt.m, "half separation")->check(CLI::PositiveNumber);
    decay->add_option("--snr-db", eopt.snr, "single SNR point, overrides --m");
    decay->add_option("--restarts", eopt.restarts, "random restarts");
    decay->add_option("--seed", eopt.seed, "search seed");
    decay->add_option("--tol", eopt.tol, "descent pass tolerance")->check(CLI::PositiveNumber);
    decay->add_option("--workers", eopt.workers, "design worker threads")->check(CLI::PositiveNumber);
    decay->add_option("--out", eopt.out, "output file (default stdout)");
    decay->add_option("--format", eopt.format, "output format")->check(format_check);
    decay->callback([&] { code = run_pe_decay(eopt); });

    CheckOpts kopt;
    auto* check = app.add_subcommand("check", "verify the balancing optimality conditions; exit 1 on failure");
    check->add_option("--model", kopt.model, "noise model")->check(model_check);
    check->add_option("--m", kopt.m, "half separations (repeatable)")->check(CLI::PositiveNumber);
    check->add_option("--grid", kopt.grid, "certificate and scan grid")->check(CLI::Range(2, 100000));
    check->add_option("--eta-rule", kopt.rule, "split point rule for the scan")->check(rule_check);
    check->add_option("--max-rate", kopt.max_rate, "largest rate in the designed sweep");
    check->add_option("--tol", kopt.tol, "tolerance for the sweep shape checks")->check(CLI::PositiveNumber);
    check->add_option("--restarts", kopt.restarts, "random restarts");
    check->add_option("--seed", kopt.seed, "search seed");
    check->add_option("--workers", kopt.workers, "design worker threads")->check(CLI::PositiveNumber);
    check->add_option("--out", kopt.out, "output file (default stdout)");
    check->add_option("--format", kopt.format, "output format")->check(format_check);
    check->callback([&] { code = run_check(kopt); });

    McOpts mopt;
    auto* mc = app.add_subcommand("mc-validate", "Monte Carlo fusion error against the exact value; exit 1 past 4 standard errors");
    mc->add_option("--model", mopt.model, "noise model")->check(model_check);
    mc->add_option("--m", mopt.m, "half separation")->check(CLI::PositiveNumber);
    mc->add_option("--rates", mopt.rates, "allocation like 1,2");
    mc->add_option("--trials", mopt.trials, "simulation trials")->check(CLI::PositiveNumber);
    mc->add_option("--seed", mopt.seed, "simulation seed");
    mc->add_option("--restarts", mopt.restarts, "design restarts");
    mc->add_option("--workers", mopt.workers, "simulation worker threads")->check(CLI::PositiveNumber);
    mc->add_option("--out", mopt.out, "output file (default stdout)");
    mc->add_option("--format", mopt.format, "output format")->check(format_check);
    mc->callback([&] { code = run_mc_validate(mopt); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int c = app.exit(e);
        return c == 0 ? 0 : 2;
    } catch (const ratebal::size_cap_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return code;
}
