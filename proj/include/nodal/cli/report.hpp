#ifndef NODAL_CLI_REPORT_HPP
#define NODAL_CLI_REPORT_HPP

#include <nodal/cli/parse.hpp>
#include <nodal/spectra.hpp>

#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace nodal {

enum class OutputFormat { table, json, csv };

/// A failure attributed to one pipeline stage.
class StageError : public Error {
public:
    StageError(std::string stage, const std::exception& cause)
        : Error(stage + ": " + cause.what()), stage_(std::move(stage))
    {
    }
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

struct JobSpec {
    std::string polynomial;
    /// Contents of a point file; empty means no singular points.
    std::string points;
    std::optional<long> k_max;
    /// Identity checks to run; empty runs all of them.
    std::set<std::string> checks;
    ArithmeticMode mode;
    std::vector<WotzlawVariant> wotzlaw = {WotzlawVariant::powers, WotzlawVariant::symbolic};
    unsigned threads = 1;
};

using Row = std::map<long, long long>;

struct WotzlawRow {
    int q = 0;
    WotzlawVariant variant = WotzlawVariant::symbolic;
    long long quotient = 0;
    long long hodge = 0;
    bool proven = false;

    friend bool operator==(const WotzlawRow&, const WotzlawRow&) = default;
};

struct Report {
    static constexpr const char* schema = "nodal-report/1";

    std::string polynomial;
    int n = 0;
    int d = 0;
    long long tau = 0;
    std::vector<std::string> points;
    long k_max = 0;
    /// Row name -> (k -> value); names follow row_names().
    std::map<std::string, Row> rows;
    Row defects;
    std::vector<WotzlawRow> wotzlaw;
    std::vector<CheckResult> checks;

    static const std::vector<std::string>& row_names()
    {
        static const std::vector<std::string> names = {"gamma", "mu", "snu", "mu2", "snu2", "Sp_P", "Sp"};
        return names;
    }

    bool checks_pass() const
    {
        return std::none_of(checks.begin(), checks.end(),
                            [](const CheckResult& c) { return c.status == CheckStatus::fail; });
    }
};

namespace detail {

template <class Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn())
{
    try {
        return fn();
    } catch (const ParseError&) {
        throw;
    } catch (const NotHomogeneous&) {
        throw;
    } catch (const PointParseError&) {
        throw;
    } catch (const CertificationError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e);
    }
}

inline Row nonzero_row(const std::map<long, long long>& values)
{
    Row r;
    for (const auto& [k, v] : values)
        if (v != 0) r[k] = v;
    return r;
}

} // namespace detail

/// Runs the whole pipeline: parse, certify, pages, spectra, quotients, checks.
inline Report run(const JobSpec& job)
{
    std::istringstream pin(job.points);
    auto points = parse_points(pin);
    const std::size_t min_vars = points.empty() ? 0 : points.front().size();
    const HomPoly f = parse_polynomial(job.polynomial, min_vars);
    for (std::size_t i = 0; i < points.size(); ++i)
        if (points[i].size() != f.num_vars())
            throw PointParseError(i + 1, "point has " + std::to_string(points[i].size()) + " coordinates, ring has " +
                                             std::to_string(f.num_vars()) + " variables");
    if (f.degree() < 2) throw ParseError(0, "degree must be at least 2");

    const OdpCertificate cert = certify_condition_A(f, points);
    KoszulComplex K(f, job.mode);
    const int n = K.n(), d = K.d();
    const long k_max = job.k_max.value_or(K.default_k_max());
    const auto ideal = detail::stage("ideal", [&] { return PointIdeal(cert.points, f.num_vars()); });
    const auto data = detail::stage(
        "spectral pages", [&] { return assemble_suite_data(K, cert, ideal, k_max, job.wotzlaw, job.threads); });
    const auto checks = detail::stage("identity suite", [&] { return identity_suite(data, job.checks); });

    Report r;
    r.polynomial = f.to_string();
    r.n = n;
    r.d = d;
    r.tau = static_cast<long long>(cert.tau);
    for (const auto& p : cert.points) r.points.push_back(p.to_string());
    r.k_max = k_max;
    const auto g = gamma_coeffs(n, d);
    auto from_table = [&](const DimTable& t) {
        std::map<long, long long> m;
        for (long k = 1; k <= k_max; ++k) m[k] = table_at(t, k);
        return detail::nonzero_row(m);
    };
    std::map<long, long long> gam;
    for (long k = 1; k <= k_max; ++k) gam[k] = gamma_at(g, k);
    r.rows["gamma"] = detail::nonzero_row(gam);
    r.rows["mu"] = from_table(data.M);
    r.rows["snu"] = from_table(data.sN);
    r.rows["mu2"] = from_table(data.M2);
    r.rows["snu2"] = from_table(data.sN2);
    r.rows["Sp_P"] = detail::nonzero_row(data.sp_pole.mult());
    r.rows["Sp"] = detail::nonzero_row(data.sp.mult());
    for (long k = 0; k <= std::max(static_cast<long>(n) * d - n - 1, static_cast<long>(cert.tau)); ++k)
        r.defects[k] = static_cast<long long>(defect(cert.points, k, f.num_vars()));
    for (const auto& [key, dim] : data.wotzlaw) {
        WotzlawRow w;
        w.variant = key.first;
        w.q = key.second;
        w.quotient = static_cast<long long>(dim);
        w.hodge = hodge_dimension(data.refined, w.q, d);
        w.proven = wotzlaw_proven(n, d, w.q, w.variant);
        r.wotzlaw.push_back(w);
    }
    r.checks = checks.checks;
    return r;
}

namespace detail {

inline std::string pad_left(const std::string& s, std::size_t w)
{
    return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}

inline std::string rtrim(std::string s)
{
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

inline std::string emit_table(const Report& r)
{
    std::ostringstream os;
    os << "f = " << r.polynomial << "\n";
    os << "n = " << r.n << ", d = " << r.d << ", tau = " << r.tau << "\n";
    os << "singular points:";
    if (r.points.empty()) os << " none";
    for (const auto& p : r.points) os << " [" << p << "]";
    os << "\n\n";

    std::size_t label_w = 1, cell_w = 1;
    for (const auto& name : Report::row_names()) label_w = std::max(label_w, name.size());
    for (long k = 1; k <= r.k_max; ++k) cell_w = std::max(cell_w, std::to_string(k).size());
    for (const auto& [name, row] : r.rows)
        for (const auto& [k, v] : row) cell_w = std::max(cell_w, std::to_string(v).size());
    auto line = [&](const std::string& label, auto&& cell) {
        std::string s = label + std::string(label_w - label.size(), ' ');
        for (long k = 1; k <= r.k_max; ++k) s += " " + pad_left(cell(k), cell_w);
        os << rtrim(s) << "\n";
    };
    line("k", [](long k) { return std::to_string(k); });
    for (const auto& name : Report::row_names()) {
        const auto it = r.rows.find(name);
        line(name, [&](long k) -> std::string {
            if (it == r.rows.end()) return "";
            auto c = it->second.find(k);
            return c == it->second.end() ? "" : std::to_string(c->second);
        });
    }

    os << "\ndefect";
    for (const auto& [k, v] : r.defects) os << " " << k << ":" << v;
    os << "\n";

    if (!r.wotzlaw.empty()) {
        os << "\nwotzlaw   q  quotient  hodge  status\n";
        for (const auto& w : r.wotzlaw) {
            const char* status = w.quotient == w.hodge ? "agree" : "differ";
            os << rtrim(std::string(to_string(w.variant)) + std::string(9 - std::string(to_string(w.variant)).size(), ' ') +
                        pad_left(std::to_string(w.q), 2) + pad_left(std::to_string(w.quotient), 10) +
                        pad_left(std::to_string(w.hodge), 7) + "  " + status +
                        (w.proven ? "" : " (conjectural range)"))
               << "\n";
        }
    }

    os << "\nchecks\n";
    std::size_t name_w = 0;
    for (const auto& c : r.checks) name_w = std::max(name_w, c.name.size());
    for (const auto& c : r.checks) {
        std::string s = "  " + c.name + std::string(name_w - c.name.size(), ' ') + "  " + to_string(c.status);
        if (!c.witnesses.empty()) {
            s += " at";
            for (auto w : c.witnesses) s += " " + std::to_string(w);
        }
        if (!c.detail.empty()) s += " (" + c.detail + ")";
        os << s << "\n";
    }
    return os.str();
}

inline nlohmann::ordered_json row_json(const Row& row)
{
    auto j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : row) j[std::to_string(k)] = std::to_string(v);
    return j;
}

inline std::string emit_json(const Report& r)
{
    nlohmann::ordered_json j;
    j["schema"] = Report::schema;
    j["polynomial"] = r.polynomial;
    j["n"] = std::to_string(r.n);
    j["d"] = std::to_string(r.d);
    j["tau"] = std::to_string(r.tau);
    j["points"] = r.points;
    j["k_max"] = std::to_string(r.k_max);
    auto rows = nlohmann::ordered_json::object();
    for (const auto& name : Report::row_names()) rows[name] = row_json(r.rows.count(name) ? r.rows.at(name) : Row{});
    j["rows"] = rows;
    j["defects"] = row_json(r.defects);
    auto w = nlohmann::ordered_json::array();
    for (const auto& x : r.wotzlaw)
        w.push_back({{"q", std::to_string(x.q)},
                     {"variant", to_string(x.variant)},
                     {"quotient", std::to_string(x.quotient)},
                     {"hodge", std::to_string(x.hodge)},
                     {"proven", x.proven}});
    j["wotzlaw"] = w;
    auto checks = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
        nlohmann::ordered_json cj{{"name", c.name}, {"status", to_string(c.status)}};
        auto wit = nlohmann::ordered_json::array();
        for (auto x : c.witnesses) wit.push_back(std::to_string(x));
        cj["witnesses"] = wit;
        if (!c.detail.empty()) cj["detail"] = c.detail;
        checks.push_back(cj);
    }
    j["checks"] = checks;
    return j.dump(2) + "\n";
}

inline std::string emit_csv(const Report& r)
{
    std::ostringstream os;
    os << "section,name,key,value\n";
    os << "input,polynomial,," << r.polynomial << "\n";
    os << "input,n,," << r.n << "\n";
    os << "input,d,," << r.d << "\n";
    os << "input,tau,," << r.tau << "\n";
    for (std::size_t i = 0; i < r.points.size(); ++i) os << "input,point," << i << "," << r.points[i] << "\n";
    for (const auto& name : Report::row_names())
        if (r.rows.count(name))
            for (const auto& [k, v] : r.rows.at(name)) os << "row," << name << "," << k << "," << v << "\n";
    for (const auto& [k, v] : r.defects) os << "defect,def," << k << "," << v << "\n";
    for (const auto& w : r.wotzlaw) {
        const std::string tag = std::string(to_string(w.variant)) + "_q" + std::to_string(w.q);
        os << "wotzlaw," << tag << ",quotient," << w.quotient << "\n";
        os << "wotzlaw," << tag << ",hodge," << w.hodge << "\n";
        os << "wotzlaw," << tag << ",proven," << (w.proven ? 1 : 0) << "\n";
    }
    for (const auto& c : r.checks) os << "check," << c.name << ",status," << to_string(c.status) << "\n";
    return os.str();
}

inline long long json_int(const nlohmann::ordered_json& j) { return std::stoll(j.get<std::string>()); }

inline Row row_from_json(const nlohmann::ordered_json& j)
{
    Row r;
    for (const auto& [k, v] : j.items()) r[std::stol(k)] = json_int(v);
    return r;
}

} // namespace detail

inline std::string emit(const Report& r, OutputFormat format)
{
    switch (format) {
    case OutputFormat::json: return detail::emit_json(r);
    case OutputFormat::csv: return detail::emit_csv(r);
    case OutputFormat::table: break;
    }
    return detail::emit_table(r);
}

/// Inverse of emit(json).
inline Report report_from_json(const std::string& text)
{
    const auto j = nlohmann::ordered_json::parse(text);
    if (j.at("schema") != Report::schema) throw Error("unsupported report schema");
    Report r;
    r.polynomial = j.at("polynomial").get<std::string>();
    r.n = static_cast<int>(detail::json_int(j.at("n")));
    r.d = static_cast<int>(detail::json_int(j.at("d")));
    r.tau = detail::json_int(j.at("tau"));
    r.points = j.at("points").get<std::vector<std::string>>();
    r.k_max = static_cast<long>(detail::json_int(j.at("k_max")));
    for (const auto& [name, row] : j.at("rows").items()) r.rows[name] = detail::row_from_json(row);
    r.defects = detail::row_from_json(j.at("defects"));
    for (const auto& w : j.at("wotzlaw")) {
        WotzlawRow x;
        x.q = static_cast<int>(detail::json_int(w.at("q")));
        x.variant = w.at("variant") == "powers" ? WotzlawVariant::powers : WotzlawVariant::symbolic;
        x.quotient = detail::json_int(w.at("quotient"));
        x.hodge = detail::json_int(w.at("hodge"));
        x.proven = w.at("proven").get<bool>();
        r.wotzlaw.push_back(x);
    }
    for (const auto& c : j.at("checks")) {
        CheckResult x;
        x.name = c.at("name").get<std::string>();
        const auto st = c.at("status").get<std::string>();
        x.status = st == "pass" ? CheckStatus::pass : st == "fail" ? CheckStatus::fail : CheckStatus::not_applicable;
        for (const auto& w : c.at("witnesses")) x.witnesses.push_back(static_cast<long>(detail::json_int(w)));
        if (c.contains("detail")) x.detail = c.at("detail").get<std::string>();
        r.checks.push_back(x);
    }
    return r;
}

} // namespace nodal

#endif // NODAL_CLI_REPORT_HPP
