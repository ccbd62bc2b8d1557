#include "wiretap/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "wiretap/units.hpp"

namespace wiretap {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view key, std::string_view v) {
    v = trim(v);
    if (v == "-inf")
        return -INFINITY;
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
        throw ConfigError("bad number for " + std::string(key) + ": '" + std::string(v) + "'");
    return x;
}

long long parse_integer(std::string_view key, std::string_view v) {
    v = trim(v);
    long long x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
        throw ConfigError("bad integer for " + std::string(key) + ": '" + std::string(v) + "'");
    return x;
}

std::uint64_t parse_seed(std::string_view key, std::string_view v) {
    v = trim(v);
    std::uint64_t x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
        throw ConfigError("bad seed for " + std::string(key) + ": '" + std::string(v) + "'");
    return x;
}

bool parse_bool(std::string_view key, std::string_view v) {
    v = trim(v);
    if (v == "1" || v == "true" || v == "yes" || v == "on")
        return true;
    if (v == "0" || v == "false" || v == "no" || v == "off")
        return false;
    throw ConfigError("bad boolean for " + std::string(key) + ": '" + std::string(v) + "'");
}

// "a,b,c" or "first:last:step"
std::vector<double> parse_real_list(std::string_view key, std::string_view v) {
    std::vector<double> out;
    if (v.find(':') != std::string_view::npos) {
        const auto parts = split(v, ':');
        if (parts.size() != 3)
            throw ConfigError("range for " + std::string(key) + " must be first:last:step");
        const double first = parse_double(key, parts[0]);
        const double last = parse_double(key, parts[1]);
        const double step = parse_double(key, parts[2]);
        if (!(step > 0.0) || last < first)
            throw ConfigError("empty or invalid range for " + std::string(key));
        const long n = std::lround(std::floor((last - first) / step + 1e-9));
        for (long i = 0; i <= n; ++i)
            out.push_back(first + step * static_cast<double>(i));
        return out;
    }
    for (auto item : split(v, ','))
        out.push_back(parse_double(key, item));
    return out;
}

std::vector<int> parse_int_list(std::string_view key, std::string_view v) {
    std::vector<int> out;
    if (trim(v).empty())
        return out;
    if (v.find(':') != std::string_view::npos) {
        const auto parts = split(v, ':');
        if (parts.size() < 2 || parts.size() > 3)
            throw ConfigError("range for " + std::string(key) + " must be first:last[:step]");
        const long long first = parse_integer(key, parts[0]);
        const long long last = parse_integer(key, parts[1]);
        const long long step = parts.size() == 3 ? parse_integer(key, parts[2]) : 1;
        if (step < 1 || last < first)
            throw ConfigError("empty or invalid range for " + std::string(key));
        for (long long i = first; i <= last; i += step)
            out.push_back(static_cast<int>(i));
        return out;
    }
    for (auto item : split(v, ','))
        out.push_back(static_cast<int>(parse_integer(key, item)));
    return out;
}

std::string_view to_string(RhoPolicy p) {
    return p == RhoPolicy::requested ? "requested" : "alice_estimate";
}

std::string curve_label(const SweepResult& res, const SweepPoint& p) {
    std::string s = "na=" + std::to_string(p.na) + " nb=" + std::to_string(p.nb) +
                    " ne=" + std::to_string(p.ne);
    if (res.axis_name != "target_sinr_db")
        s += " S=" + format_number(p.target_sinr_db);
    if (res.axis_name != "sigma_h_db")
        s += " sigma_h=" + format_number(p.sigma_h_db);
    return s;
}

double db_or_nan(double x) { return x > 0.0 ? to_db(x) : NAN; }

double stderr_db(const Estimate& e) {
    return e.mean > 0.0 ? 10.0 / std::log(10.0) * e.stderr_ / e.mean : NAN;
}

} // namespace

std::string format_number(double x) {
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
    const std::string k(trim(key));
    if (k == "scenario") {
        const auto s = parse_scenario(trim(value));
        if (!s)
            throw ConfigError("unknown scenario '" + std::string(trim(value)) + "'");
        cfg.scenario = *s;
    } else if (k == "na") {
        cfg.na = parse_int_list(k, value);
    } else if (k == "nb") {
        cfg.nb = parse_int_list(k, value);
    } else if (k == "ne") {
        cfg.ne = parse_int_list(k, value);
    } else if (k == "target_sinr_db") {
        cfg.target_sinr_db = parse_real_list(k, value);
    } else if (k == "sigma_h_db") {
        cfg.sigma_h_db = parse_real_list(k, value);
    } else if (k == "gamma_ecsi") {
        cfg.gamma_ecsi = parse_double(k, value);
    } else if (k == "gamma_ea_sq") {
        cfg.gamma_ea_sq = parse_double(k, value);
    } else if (k == "trials") {
        const long long t = parse_integer(k, value);
        if (t < 1)
            throw ConfigError("trials must be ≥ 1");
        if (t > 100000000)
            throw ConfigError("trials is unreasonably large");
        cfg.trials = static_cast<int>(t);
    } else if (k == "power_db") {
        cfg.power_db = parse_double(k, value);
    } else if (k == "sigma_b_sq") {
        cfg.sigma_b_sq = parse_double(k, value);
    } else if (k == "sigma_e_sq") {
        cfg.sigma_e_sq = parse_double(k, value);
    } else if (k == "seed" || k == "master_seed") {
        cfg.master_seed = parse_seed(k, value);
    } else if (k == "schemes") {
        cfg.schemes.clear();
        for (auto item : split(value, ',')) {
            if (item == "all") {
                cfg.schemes = all_schemes();
                continue;
            }
            const auto s = parse_scheme(item);
            if (!s)
                throw ConfigError("unknown scheme '" + std::string(item) + "'");
            cfg.schemes.push_back(*s);
        }
    } else if (k == "strict_paper_eq38") {
        cfg.robust.estimate_propagation = parse_bool(k, value);
    } else if (k == "rho_policy") {
        const auto v = trim(value);
        if (v == "requested")
            cfg.robust.rho_policy = RhoPolicy::requested;
        else if (v == "alice_estimate")
            cfg.robust.rho_policy = RhoPolicy::alice_estimate;
        else
            throw ConfigError("rho_policy must be requested or alice_estimate");
    } else if (k == "threads") {
        const long long t = parse_integer(k, value);
        if (t < 0)
            throw ConfigError("threads must be ≥ 0");
        cfg.threads = static_cast<unsigned>(t);
    } else {
        throw ConfigError("unknown config key '" + k + "'");
    }
}

ExperimentConfig parse_config_text(std::string_view text, ExperimentConfig base) {
    const auto body = trim(text);
    if (!body.empty() && body.front() == '{') {
        Json j;
        try {
            j = Json::parse(body);
        } catch (const Json::exception& e) {
            throw ConfigError(std::string("malformed JSON config: ") + e.what());
        }
        return config_from_json(j.contains("config") ? j.at("config") : j);
    }
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view l = line;
        if (const auto hash = l.find('#'); hash != std::string_view::npos)
            l = l.substr(0, hash);
        l = trim(l);
        if (l.empty())
            continue;
        const auto eq = l.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        apply_setting(base, l.substr(0, eq), l.substr(eq + 1));
    }
    return base;
}

Json config_to_json(const ExperimentConfig& cfg) {
    Json j;
    j["scenario"] = std::string(to_string(cfg.scenario));
    j["na"] = cfg.na;
    j["nb"] = cfg.nb;
    j["ne"] = cfg.ne;
    j["target_sinr_db"] = cfg.target_sinr_db;
    j["sigma_h_db"] = Json::array();
    for (double s : cfg.sigma_h_db)
        j["sigma_h_db"].push_back(std::isinf(s) ? Json("-inf") : Json(s));
    j["gamma_ecsi"] = cfg.gamma_ecsi;
    j["gamma_ea_sq"] = cfg.gamma_ea_sq;
    j["trials"] = cfg.trials;
    j["power_db"] = cfg.power_db;
    j["sigma_b_sq"] = cfg.sigma_b_sq;
    j["sigma_e_sq"] = cfg.sigma_e_sq;
    j["master_seed"] = cfg.master_seed;
    j["schemes"] = Json::array();
    for (Scheme s : cfg.schemes)
        j["schemes"].push_back(std::string(to_string(s)));
    j["strict_paper_eq38"] = cfg.robust.estimate_propagation;
    j["rho_policy"] = std::string(to_string(cfg.robust.rho_policy));
    return j;
}

ExperimentConfig config_from_json(const Json& j) {
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");
    ExperimentConfig cfg;
    try {
        for (const auto& [key, val] : j.items()) {
            if (key == "master_seed" && val.is_number_unsigned()) {
                cfg.master_seed = val.get<std::uint64_t>();
                continue;
            }
            std::string text;
            if (val.is_array()) {
                for (std::size_t i = 0; i < val.size(); ++i) {
                    const auto& e = val[i];
                    text += i ? "," : "";
                    if (e.is_string())
                        text += e.get<std::string>();
                    else if (e.is_number_integer())
                        text += std::to_string(e.get<long long>());
                    else
                        text += format_number(e.get<double>());
                }
                if (val.empty() && key != "nb" && key != "ne")
                    throw ConfigError("config list '" + key + "' must not be empty");
            } else if (val.is_string()) {
                text = val.get<std::string>();
            } else if (val.is_boolean()) {
                text = val.get<bool>() ? "true" : "false";
            } else if (val.is_number_integer()) {
                text = std::to_string(val.get<long long>());
            } else if (val.is_number()) {
                text = format_number(val.get<double>());
            } else {
                throw ConfigError("unsupported value for config key '" + key + "'");
            }
            apply_setting(cfg, key, text);
        }
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("bad JSON config: ") + e.what());
    }
    return cfg;
}

std::string results_text(const SweepResult& res, OutputFormat fmt) {
    struct Field {
        const char* name;
        double value;
        bool integer = false;
    };
    std::vector<std::vector<Field>> rows;
    std::vector<std::string> schemes;
    std::vector<bool> flags;
    for (std::size_t i = 0; i < res.points.size(); ++i) {
        const SweepPoint& p = res.points[i];
        for (const auto& [scheme, st] : p.stats) {
            schemes.emplace_back(to_string(scheme));
            flags.push_back(p.extrapolated && scheme == Scheme::analytic_naive);
            rows.push_back({
                {"axis", res.axis[i]},
                {"na", static_cast<double>(p.na), true},
                {"nb", static_cast<double>(p.nb), true},
                {"ne", static_cast<double>(p.ne), true},
                {"target_sinr_db", p.target_sinr_db},
                {"sigma_h_db", p.sigma_h_db},
                {"trials", static_cast<double>(st.trials), true},
                {"outages", static_cast<double>(st.outages), true},
                {"loaded", static_cast<double>(st.loaded), true},
                {"invalid", static_cast<double>(st.invalid), true},
                {"sinr_b_roe", st.roe_b.mean},
                {"sinr_b_roe_se", st.roe_b.stderr_},
                {"sinr_b_roe_db", db_or_nan(st.roe_b.mean)},
                {"sinr_b_mean", st.sinr_b.mean},
                {"sinr_b_mean_se", st.sinr_b.stderr_},
                {"sinr_b_mean_db", db_or_nan(st.sinr_b.mean)},
                {"sinr_e_roe", st.roe_e.mean},
                {"sinr_e_roe_se", st.roe_e.stderr_},
                {"sinr_e_roe_db", db_or_nan(st.roe_e.mean)},
                {"sinr_e_mean", st.sinr_e.mean},
                {"sinr_e_mean_se", st.sinr_e.stderr_},
                {"sinr_e_mean_db", db_or_nan(st.sinr_e.mean)},
                {"secrecy_mean", st.secrecy.mean},
                {"secrecy_se", st.secrecy.stderr_},
                {"secrecy_of_means", st.secrecy_of_means},
            });
        }
    }

    if (fmt == OutputFormat::json) {
        Json out;
        out["axis_name"] = res.axis_name;
        out["version"] = res.version;
        out["records"] = Json::array();
        for (std::size_t r = 0; r < rows.size(); ++r) {
            Json rec;
            rec["scheme"] = schemes[r];
            rec["extrapolated"] = static_cast<bool>(flags[r]);
            for (const auto& f : rows[r]) {
                if (f.integer)
                    rec[f.name] = static_cast<long long>(f.value);
                else if (std::isfinite(f.value))
                    rec[f.name] = f.value;
                else
                    rec[f.name] = nullptr;
            }
            out["records"].push_back(rec);
        }
        return out.dump(2) + "\n";
    }

    std::string s = "axis_name,scheme,extrapolated";
    if (!rows.empty())
        for (const auto& f : rows.front())
            s += std::string(",") + f.name;
    s += "\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        s += res.axis_name + "," + schemes[r] + "," + (flags[r] ? "1" : "0");
        for (const auto& f : rows[r])
            s += "," + format_number(f.value);
        s += "\n";
    }
    return s;
}

std::string plot_table(const SweepResult& res) {
    enum class Metric { sinr_b, sinr_e, secrecy };
    std::vector<Metric> metrics;
    switch (res.config.scenario) {
    case Scenario::fig1_ne_sweep:
        metrics = {Metric::sinr_e};
        break;
    case Scenario::fig2_prediction:
        metrics = {Metric::sinr_b};
        break;
    case Scenario::fig3_sinr_vs_target:
    case Scenario::fig5_sigma_sweep:
        metrics = {Metric::sinr_b, Metric::sinr_e};
        break;
    case Scenario::fig4_secrecy:
        metrics = {Metric::secrecy};
        break;
    case Scenario::custom:
        metrics = {Metric::sinr_b, Metric::sinr_e, Metric::secrecy};
        break;
    }
    std::string s = res.axis_name +
                    ",curve,scheme,metric,mean,mean_db,stderr,stderr_db,outage_fraction\n";
    for (std::size_t i = 0; i < res.points.size(); ++i) {
        const SweepPoint& p = res.points[i];
        const std::string curve = curve_label(res, p);
        for (Metric m : metrics) {
            for (const auto& [scheme, st] : p.stats) {
                const bool analytic = scheme == Scheme::analytic_naive;
                if (analytic && m != Metric::sinr_b)
                    continue;
                const Estimate& e = m == Metric::sinr_b   ? st.roe_b
                                    : m == Metric::sinr_e ? st.roe_e
                                                          : st.secrecy;
                const char* name = m == Metric::sinr_b   ? "sinr_b"
                                   : m == Metric::sinr_e ? "sinr_e"
                                                         : "secrecy_bits";
                const bool db = m != Metric::secrecy;
                const double frac =
                    st.trials > 0 ? static_cast<double>(st.outages) / static_cast<double>(st.trials)
                                  : 0.0;
                s += format_number(res.axis[i]) + "," + curve + "," + std::string(to_string(scheme)) +
                     "," + name + "," + format_number(e.mean) + "," +
                     (db ? format_number(db_or_nan(e.mean)) : std::string()) + "," +
                     format_number(e.stderr_) + "," +
                     (db ? format_number(stderr_db(e)) : std::string()) + "," + format_number(frac) +
                     "\n";
            }
        }
    }
    return s;
}

Json manifest(const SweepResult& res, double wall_time_s) {
    Json j;
    j["tool"] = "wiretap";
    j["version"] = res.version;
    j["config"] = config_to_json(res.config);
    j["master_seed"] = res.config.master_seed;
    j["axis_name"] = res.axis_name;
    j["axis"] = res.axis;
    j["wall_time_s"] = wall_time_s;
    return j;
}

} // namespace wiretap
