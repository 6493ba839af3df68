// hyperspline: multiply periodic spline spaces on the Klein disk.
//
//   hyperspline tile  --depth D --model klein|poincare -o PREFIX
//   hyperspline dim   --lines N --degree n --smooth r [--configs C] [--seed S]
//   hyperspline basis --degree n --smooth r [--partition FILE] [--refine K] -o FILE
//   hyperspline eval  --basis FILE --points FILE [-o FILE] [--check-periodic K]
//
// Exit codes: 0 success, 2 validation error, 3 numerical-agreement failure.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hyperspline/hyperspline.hpp"

namespace hs = hyperspline;
using hs::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

// Outputs are written atomically: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw hs::ValidationError("cannot open output path: " + tmp.string());
        os << content;
        if (!os) throw hs::ValidationError("failed writing: " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

json read_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw hs::ValidationError("cannot read file: " + path);
    json j;
    try {
        is >> j;
    } catch (const json::exception& ex) {
        throw hs::ValidationError("malformed JSON in " + path + ": " + ex.what());
    }
    return j;
}

uint64_t seed_from_env() {
    const char* env = std::getenv("HYPERSPLINE_SEED");
    if (!env) return 0;
    return static_cast<uint64_t>(std::strtoull(env, nullptr, 10));
}

struct TileConfig {
    int depth = 2;
    std::string model = "klein";
    std::string out = "tiling";
    bool no_color = false;
};

int cmd_tile(const TileConfig& cfg) {
    if (cfg.depth < 0 || cfg.depth > 5)
        throw hs::ValidationError("tile: depth must be in 0..5");
    const hs::DiskModel model =
        cfg.model == "poincare" ? hs::DiskModel::Poincare : hs::DiskModel::Klein;
    const auto cells = hs::tile(cfg.depth);

    std::ostringstream svg;
    hs::write_tiling_svg(svg, cells, model, !cfg.no_color);
    write_file_atomic(cfg.out + ".svg", svg.str());
    write_file_atomic(cfg.out + ".json", hs::tiling_to_json(cells, model).dump(2) + "\n");

    const auto relations = hs::find_relations(8);
    std::cout << "tiles=" << cells.size() << " depth=" << cfg.depth << " model=" << cfg.model
              << " out=" << cfg.out << ".{svg,json}\n";
    std::cout << "side pairings:";
    for (const hs::SidePairing& sp : hs::side_pairings())
        std::cout << " " << sp.side << "->" << sp.partner << "(g" << sp.generator << ")";
    std::cout << "\nrelations(len<=8)=" << relations.size();
    if (!relations.empty()) {
        std::cout << " shortest=";
        for (int k : relations.front()) std::cout << k;
    }
    std::cout << "\n";
    return 0;
}

struct DimConfig {
    int lines = 2;
    int degree = 1;
    int smooth = 0;
    int configs = 5;
    double tol = 1e-8;
    uint64_t seed = seed_from_env();
};

int cmd_dim(const DimConfig& cfg) {
    if (cfg.lines < 2) throw hs::ValidationError("dim: need at least 2 lines");
    if (cfg.degree < 0 || cfg.smooth < 0)
        throw hs::ValidationError("dim: degree and smooth must be nonnegative");

    const long formula = hs::conformality_dim_formula(cfg.lines, cfg.degree, cfg.smooth);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> pt(-0.4, 0.4);
    std::uniform_real_distribution<double> ang(0.0, hs::pi());

    bool all_agree = true;
    long oracle = -1;
    for (int c = 0; c < cfg.configs; ++c) {
        const double px = pt(rng), py = pt(rng);
        std::vector<double> angles;
        while (static_cast<int>(angles.size()) < cfg.lines) {
            const double t = ang(rng);
            bool ok = true;
            for (double s : angles)
                if (std::abs(std::sin(t - s)) < 0.05) ok = false;
            if (ok) angles.push_back(t);
        }
        std::vector<hs::LineForm> lines;
        for (double t : angles)
            lines.push_back({std::cos(t), std::sin(t), -(std::cos(t) * px + std::sin(t) * py)});
        const long dim =
            static_cast<long>(hs::conformality_nullspace(lines, cfg.degree, cfg.smooth, cfg.tol).size());
        oracle = dim;
        if (dim != formula) all_agree = false;
    }

    std::cout << "formula=" << formula << " oracle=" << oracle << " configs=" << cfg.configs
              << " seed=" << cfg.seed << " tol=" << cfg.tol << "\n";
    if (!all_agree) {
        std::cerr << "dim: formula and nullspace oracle disagree\n";
        return kExitNumerical;
    }
    return 0;
}

struct BasisConfig {
    int degree = 1;
    int smooth = 0;
    int refine = 0;
    double tol = 1e-10;
    std::string partition_path;
    std::string out = "basis.json";
};

int cmd_basis(const BasisConfig& cfg) {
    hs::Partition part = cfg.partition_path.empty()
                             ? hs::default_triangulation()
                             : hs::load_partition(read_json_file(cfg.partition_path));
    for (int i = 0; i < cfg.refine; ++i) part = hs::refine(part);

    const hs::SplineSpaceSpec spec = hs::make_spec(std::move(part), cfg.degree, cfg.smooth);
    const hs::ConstraintSystem sys = hs::assemble(spec);
    const hs::SplineBasis basis = hs::solve_basis(sys, cfg.tol);

    write_file_atomic(cfg.out, hs::basis_to_json(basis).dump(2) + "\n");
    std::cout << "dimension=" << basis.dimension() << " max_residual=" << basis.max_residual
              << " rows=" << sys.rows.size() << " cols=" << sys.cols << " tol=" << cfg.tol
              << " out=" << cfg.out << "\n";
    if (basis.max_residual > 1e-9) {
        std::cerr << "basis: residual blowup (max residual " << basis.max_residual << ")\n";
        return kExitNumerical;
    }
    return 0;
}

struct EvalConfig {
    std::string basis_path;
    std::string points_path;
    std::string out = "values.json";
    int check_periodic = -1;
    double tol = 1e-10;
};

int cmd_eval(const EvalConfig& cfg) {
    const hs::SplineBasis basis = hs::basis_from_json(read_json_file(cfg.basis_path));

    std::vector<hs::DiskPoint> points;
    const json pts = read_json_file(cfg.points_path);
    if (!pts.is_array()) throw hs::ValidationError("points file: expected a JSON list of points");
    for (const json& p : pts) {
        hs::DiskPoint q;
        if (p.is_array() && p.size() == 2)
            q = hs::klein_point(p[0].get<double>(), p[1].get<double>());
        else if (p.is_object())
            q = hs::klein_point(p.at("x").get<double>(), p.at("y").get<double>());
        else
            throw hs::ValidationError("points file: each point must be [x, y] or {x, y}");
        if (!q.interior())
            throw hs::ValidationError("eval: point outside the open unit disk");
        points.push_back(q);
    }

    json values = json::array();
    double max_dev = 0.0;
    for (const hs::PeriodicSpline& s : basis.splines) {
        json row = json::array();
        for (const hs::DiskPoint& p : points) {
            const double v = hs::spline_eval(s, p, cfg.tol);
            row.push_back(v);
            if (cfg.check_periodic >= 0) {
                const hs::DiskPoint gp =
                    hs::group_apply(hs::bolza_generator(cfg.check_periodic), p);
                max_dev = std::max(max_dev, std::abs(v - hs::spline_eval(s, gp, cfg.tol)));
            }
        }
        values.push_back(row);
    }

    json out = json{{"dimension", basis.dimension()}, {"values", values}};
    if (cfg.check_periodic >= 0) out["max_periodic_deviation"] = max_dev;
    write_file_atomic(cfg.out, out.dump(2) + "\n");

    std::cout << "splines=" << basis.dimension() << " points=" << points.size()
              << " out=" << cfg.out;
    if (cfg.check_periodic >= 0)
        std::cout << " check_periodic=g" << cfg.check_periodic << " max_deviation=" << max_dev;
    std::cout << "\n";
    if (cfg.check_periodic >= 0 && max_dev > 1e-9) {
        std::cerr << "eval: periodicity deviation above 1e-9\n";
        return kExitNumerical;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiply periodic splines on the Klein disk (Bolza group)"};
    app.require_subcommand(1);

    TileConfig tile_cfg;
    CLI::App* tile = app.add_subcommand("tile", "Export a tiling of the disk as SVG + JSON");
    tile->add_option("--depth", tile_cfg.depth, "Word length of the tiling (0..5)")
        ->capture_default_str();
    tile->add_option("--model", tile_cfg.model, "Disk model: klein or poincare")
        ->check(CLI::IsMember({"klein", "poincare"}))
        ->capture_default_str();
    tile->add_option("-o,--out", tile_cfg.out, "Output prefix")->capture_default_str();
    tile->add_flag("--no-color", tile_cfg.no_color, "Disable generator-index coloring");

    DimConfig dim_cfg;
    CLI::App* dim = app.add_subcommand("dim", "Conformality dimension: formula vs nullspace oracle");
    dim->add_option("--lines", dim_cfg.lines, "Number of concurrent lines")->capture_default_str();
    dim->add_option("--degree", dim_cfg.degree, "Polynomial degree n")->capture_default_str();
    dim->add_option("--smooth", dim_cfg.smooth, "Smoothness r")->capture_default_str();
    dim->add_option("--configs", dim_cfg.configs, "Random line configurations to test")
        ->capture_default_str();
    dim->add_option("--tol", dim_cfg.tol, "Singular value cutoff (relative)")->capture_default_str();
    dim->add_option("--seed", dim_cfg.seed, "RNG seed")->envname("HYPERSPLINE_SEED");

    BasisConfig basis_cfg;
    CLI::App* basis = app.add_subcommand("basis", "Construct a multiply periodic spline basis");
    basis->add_option("--degree", basis_cfg.degree, "Polynomial degree n")->capture_default_str();
    basis->add_option("--smooth", basis_cfg.smooth, "Smoothness r (-1 disables constraints)")
        ->capture_default_str();
    basis->add_option("--partition", basis_cfg.partition_path, "Partition JSON (default: star)");
    basis->add_option("--refine", basis_cfg.refine, "Refinement rounds to apply")
        ->capture_default_str();
    basis->add_option("--tol", basis_cfg.tol, "Singular value cutoff (relative)")
        ->capture_default_str();
    basis->add_option("-o,--out", basis_cfg.out, "Output basis JSON")->capture_default_str();

    EvalConfig eval_cfg;
    CLI::App* eval = app.add_subcommand("eval", "Evaluate a basis at points");
    eval->add_option("--basis", eval_cfg.basis_path, "Basis JSON file")->required();
    eval->add_option("--points", eval_cfg.points_path, "Points JSON file")->required();
    eval->add_option("-o,--out", eval_cfg.out, "Output values JSON")->capture_default_str();
    eval->add_option("--check-periodic", eval_cfg.check_periodic,
                     "Also evaluate at g_k(p) and report the max deviation")
        ->check(CLI::Range(0, 7));
    eval->add_option("--tol", eval_cfg.tol, "Canonicalization tolerance")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (tile->parsed()) return cmd_tile(tile_cfg);
        if (dim->parsed()) return cmd_dim(dim_cfg);
        if (basis->parsed()) return cmd_basis(basis_cfg);
        if (eval->parsed()) return cmd_eval(eval_cfg);
    } catch (const hs::ValidationError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitValidation;
    } catch (const hs::NumericError& ex) {
        std::cerr << "numerical error: " << ex.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
