#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "igavib/model.hpp"

namespace {

namespace fs = std::filesystem;
using namespace igavib;

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw InputError("write failed for '" + path.string() + "'");
}

int run(int argc, char** argv) {
    CLI::App app{"Isogeometric free-vibration analysis of stiffened plates with cutouts"};
    app.require_subcommand(1);

    std::string model_path, out_dir = ".", formats = "csv", bc_override, fixture_name, emit_path;
    int modes_override = -1, refine_levels = 0, quadrature_override = -1;

    CLI::App* analyze = app.add_subcommand("analyze", "run a free-vibration analysis");
    analyze->add_option("model", model_path, "model JSON file")->required();
    analyze->add_option("--modes", modes_override, "number of modes to extract");
    analyze->add_option("--refine", refine_levels, "extra dyadic refinement levels");
    analyze->add_option("--bc", bc_override, "boundary condition override (cccc|ssss|ffff)");
    analyze->add_option("--out", out_dir, "output directory (default: current)");
    analyze->add_option("--format", formats, "comma-separated outputs: csv,vtk");
    analyze->add_option("--quadrature", quadrature_override, "Gauss points per direction");

    CLI::App* validate = app.add_subcommand("validate", "schema-check a model file");
    validate->add_option("model", model_path, "model JSON file")->required();

    CLI::App* fixtures = app.add_subcommand("fixtures", "built-in validation models");
    CLI::App* fx_list = fixtures->add_subcommand("list", "list fixture names");
    CLI::App* fx_emit = fixtures->add_subcommand("emit", "write a fixture model file");
    fx_emit->add_option("name", fixture_name, "fixture name")->required();
    fx_emit->add_option("--out", emit_path, "output file (default: <name>.json)");
    fixtures->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed()) {
        parse_model_file(model_path);
        std::cout << "ok: " << model_path << "\n";
        return 0;
    }

    if (fixtures->parsed()) {
        if (fx_list->parsed()) {
            for (const std::string& n : fixture_names()) std::cout << n << "\n";
            return 0;
        }
        if (fx_emit->parsed()) {
            const std::string text = fixture_text(fixture_name);
            const fs::path path = emit_path.empty() ? fs::path(fixture_name + ".json")
                                                    : fs::path(emit_path);
            write_file(path, text);
            std::cout << "wrote " << path.string() << "\n";
            return 0;
        }
    }

    // analyze
    ModelDocument doc = parse_model_file(model_path);
    if (modes_override >= 0) doc.analysis.n_modes = modes_override;
    if (quadrature_override >= 0) doc.analysis.quadrature = quadrature_override;
    if (!bc_override.empty()) {
        if (bc_override == "cccc")
            doc.boundary = BcKind::kClamped;
        else if (bc_override == "ssss")
            doc.boundary = BcKind::kSimplySupported;
        else if (bc_override == "ffff")
            doc.boundary = BcKind::kFree;
        else
            throw InputError("--bc expects cccc, ssss or ffff");
    }
    for (int l = 0; l < refine_levels; ++l) {
        doc.analysis.subdiv_u = 2 * doc.analysis.subdiv_u + 1;
        doc.analysis.subdiv_v = 2 * doc.analysis.subdiv_v + 1;
    }

    const ResultBundle bundle = run_analysis(doc);

    const std::string stem = doc.name.empty() ? fs::path(model_path).stem().string() : doc.name;
    fs::create_directories(out_dir);
    std::istringstream fmt_stream(formats);
    std::string fmt;
    while (std::getline(fmt_stream, fmt, ',')) {
        if (fmt == "csv") {
            write_file(fs::path(out_dir) / (stem + ".csv"), results_to_csv(bundle));
        } else if (fmt == "vtk") {
            write_file(fs::path(out_dir) / (stem + ".vtk"), results_to_vtk(bundle));
        } else if (!fmt.empty()) {
            throw InputError("unknown output format '" + fmt + "'");
        }
    }

    std::printf("%s: %d elements, %d DOFs (%d free), %.2f s\n", stem.c_str(), bundle.n_elements,
                bundle.n_dofs, bundle.n_free_dofs, bundle.wall_seconds);
    std::printf("%6s %16s %14s\n", "mode", "omega [rad/s]", "omega_tilde");
    for (int i = 0; i < bundle.omega.size(); ++i) {
        std::printf("%6d %16.6f %14.6f\n", i + 1, bundle.omega[i], bundle.omega_tilde[i]);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const igavib::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
