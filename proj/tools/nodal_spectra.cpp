// Command-line front end: certifies a nodal hypersurface, computes the
// Koszul/pole-order data and both spectra, and prints a report.

#include <nodal/cli/report.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

enum Exit { ok = 0, usage = 1, certification = 2, identity = 3, computation = 4 };

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::set<std::string> parse_checks(const std::string& list)
{
    if (list == "all") return {};
    std::set<std::string> out;
    std::stringstream ss(list);
    std::string name;
    const auto& known = nodal::identity_check_names();
    while (std::getline(ss, name, ',')) {
        if (name.empty()) continue;
        if (std::find(known.begin(), known.end(), name) == known.end())
            throw CLI::ValidationError("--checks", "unknown check '" + name + "'");
        out.insert(name);
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spectra and pole order data of projective hypersurfaces with only nodes"};
    std::string poly, points_file, mode = "rational", emit = "table", checks = "all", wotzlaw = "both";
    long kmax = -1;
    unsigned primes = 3, threads = 1;
    bool search = false;
    app.add_option("--poly", poly, "Polynomial expression or a file containing one")->required();
    app.add_option("--points", points_file, "File of singular points, one `a:b:c` per line");
    app.add_flag("--search-points", search, "Find singular points with coordinates in {0, ±1, ±2, ±1/2} (heuristic)");
    app.add_option("--kmax", kmax, "Last degree of the window (default (n+1)(d-1)+2d)");
    app.add_option("--mode", mode, "Arithmetic for ranks")->check(CLI::IsMember({"rational", "modular"}));
    app.add_option("--primes", primes, "Agreeing primes required in modular mode")->check(CLI::Range(1u, 64u));
    app.add_option("--emit", emit, "Output format")->check(CLI::IsMember({"table", "json", "csv"}));
    app.add_option("--checks", checks, "all, or a comma-separated list of identity checks");
    app.add_option("--wotzlaw", wotzlaw, "Quotient variants to compare")
        ->check(CLI::IsMember({"powers", "symbolic", "both"}));
    app.add_option("--threads", threads, "Worker threads for per-degree work")->check(CLI::Range(1u, 256u));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    nodal::JobSpec job;
    try {
        job.polynomial = std::filesystem::is_regular_file(poly) ? slurp(poly) : poly;
        if (!points_file.empty()) job.points = slurp(points_file);
        if (kmax >= 0) job.k_max = kmax;
        job.checks = parse_checks(checks);
        job.threads = threads;
        job.mode = mode == "modular" ? nodal::ArithmeticMode::modular_mode(primes) : nodal::ArithmeticMode::rational_mode();
        if (wotzlaw == "powers") job.wotzlaw = {nodal::WotzlawVariant::powers};
        if (wotzlaw == "symbolic") job.wotzlaw = {nodal::WotzlawVariant::symbolic};
        if (search) {
            if (!points_file.empty()) throw std::runtime_error("--points and --search-points are exclusive");
            for (const auto& p : nodal::search_singular_points(nodal::parse_polynomial(job.polynomial)))
                job.points += p.to_string() + "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    }

    const auto format = emit == "json" ? nodal::OutputFormat::json
                        : emit == "csv" ? nodal::OutputFormat::csv
                                        : nodal::OutputFormat::table;
    try {
        const auto report = nodal::run(job);
        std::cout << nodal::emit(report, format);
        return report.checks_pass() ? ok : identity;
    } catch (const nodal::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const nodal::NotHomogeneous& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const nodal::PointParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const nodal::CertificationError& e) {
        std::cerr << "condition (A) not established: " << e.what() << "\n";
        return certification;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return computation;
    }
}
