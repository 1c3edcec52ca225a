#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "igavib/model.hpp"

using namespace igavib;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    EXPECT_TRUE(in) << p;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path temp_file(const std::string& name, const std::string& content) {
    const fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
}

const char* kMinimalRectangle = R"({
  "geometry": {"kind": "rectangle", "a": 1.0, "b": 1.0},
  "layup": {"material": {"E": 200e9, "nu": 0.3, "rho": 8000}, "thickness": 0.01}
})";

int run_cli(const std::string& args) {
    const std::string cmd = std::string(IGAVIB_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST(ParseModel, MinimalRectangleGetsDefaults) {
    const ModelDocument doc = parse_model_text(kMinimalRectangle);
    EXPECT_EQ(doc.geometry.kind, GeometrySpec::Kind::kRectangle);
    EXPECT_EQ(doc.analysis.n_modes, 6);
    EXPECT_DOUBLE_EQ(doc.analysis.shear_correction, 5.0 / 6.0);
    EXPECT_EQ(doc.boundary, BcKind::kClamped);
    EXPECT_EQ(doc.layup.angles_deg.size(), 1u);
    EXPECT_EQ(doc.analysis.norm_scheme, Normalization::Scheme::kNone);
}

TEST(ParseModel, UnknownFieldIsHardErrorWithPath) {
    const std::string bad = R"({
      "geometry": {"kind": "rectangle", "a": 1.0, "b": 1.0, "frobnicate": 3},
      "layup": {"material": {"E": 200e9, "nu": 0.3, "rho": 8000}, "thickness": 0.01}
    })";
    try {
        parse_model_text(bad, "model.json");
        FAIL() << "expected InputError";
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("geometry.frobnicate"), std::string::npos) << e.what();
    }
}

TEST(ParseModel, MalformedJsonRejected) {
    EXPECT_THROW(parse_model_text("{ not json"), InputError);
}

TEST(Fixtures, HeartFixtureEncodesTableGeometry) {
    const ModelDocument doc = parse_model_text(fixture_text("heart-isotropic-ssss"));
    ASSERT_TRUE(doc.geometry.inner_curve.has_value());
    ASSERT_TRUE(doc.geometry.outer_curve.has_value());
    const NurbsCurve& inner = *doc.geometry.inner_curve;
    ASSERT_EQ(inner.points.size(), 17u);
    const double xs[17] = {6, 5, 4, 3, 2, 2, 2, 2, 2, 1.414, 4, 4.243, 6, 5.657, 8, 5.657, 6};
    const double ys[17] = {8, 8, 8, 8, 8, 7, 6, 5, 4, 1.414, 2, 1.414, 4, 2.828, 6, 5.657, 8};
    const double ws[17] = {1, 1, 1, 1, 1, 1, 1, 1, 1, 0.707, 1, 0.707, 1, 0.707, 1, 0.707, 1};
    for (int i = 0; i < 17; ++i) {
        EXPECT_EQ(inner.points[i].x, xs[i]) << i;
        EXPECT_EQ(inner.points[i].y, ys[i]) << i;
        EXPECT_EQ(inner.points[i].z, 0.0) << i;
        EXPECT_EQ(inner.points[i].w, ws[i]) << i;
    }
    const NurbsCurve& outer = *doc.geometry.outer_curve;
    ASSERT_EQ(outer.points.size(), 9u);
    const double ox[9] = {10, 5, 0, 0, 0, 5, 10, 10, 10};
    const double oy[9] = {10, 10, 10, 5, 0, 0, 0, 5, 10};
    for (int i = 0; i < 9; ++i) {
        EXPECT_EQ(outer.points[i].x, ox[i]) << i;
        EXPECT_EQ(outer.points[i].y, oy[i]) << i;
        EXPECT_EQ(outer.points[i].w, 1.0) << i;
    }
}

TEST(Fixtures, RepoFilesMatchEmbeddedText) {
    const fs::path dir = fs::path(IGAVIB_REPO_DIR) / "fixtures";
    for (const std::string& name : fixture_names()) {
        const fs::path file = dir / (name + ".json");
        ASSERT_TRUE(fs::exists(file)) << file;
        EXPECT_EQ(read_file(file), fixture_text(name)) << name;
    }
}

TEST(Fixtures, AllFixturesParse) {
    for (const std::string& name : fixture_names()) {
        EXPECT_NO_THROW(parse_model_text(fixture_text(name), name)) << name;
    }
}

TEST(RoundTrip, CanonicalFormIsAFixedPoint) {
    for (const std::string& name : fixture_names()) {
        const ModelDocument doc = parse_model_text(fixture_text(name), name);
        const std::string once = model_to_json_text(doc);
        const ModelDocument redoc = parse_model_text(once, name + "-roundtrip");
        EXPECT_EQ(model_to_json_text(redoc), once) << name;
    }
}

TEST(RunAnalysis, ZeroModesYieldsEmptyTableWithMetadata) {
    ModelDocument doc = parse_model_text(kMinimalRectangle);
    doc.analysis.n_modes = 0;
    doc.analysis.subdiv_u = doc.analysis.subdiv_v = 3;
    doc.analysis.grid = 8;
    const ResultBundle bundle = run_analysis(doc);
    EXPECT_EQ(bundle.omega.size(), 0);
    EXPECT_GT(bundle.n_elements, 0);
    EXPECT_GT(bundle.n_dofs, 0);
    const std::string csv = results_to_csv(bundle);
    EXPECT_EQ(csv, "mode,omega_rad_s,omega_tilde\n");
}

TEST(RunAnalysis, CsvRowsMatchModeCount) {
    ModelDocument doc = parse_model_text(kMinimalRectangle);
    doc.analysis.n_modes = 3;
    doc.analysis.subdiv_u = doc.analysis.subdiv_v = 5;
    doc.analysis.grid = 8;
    const ResultBundle bundle = run_analysis(doc);
    const std::string csv = results_to_csv(bundle);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);  // header + 3 rows
}

TEST(RunAnalysis, VtkHasOneFieldPerMode) {
    ModelDocument doc = parse_model_text(kMinimalRectangle);
    doc.analysis.n_modes = 3;
    doc.analysis.subdiv_u = doc.analysis.subdiv_v = 5;
    doc.analysis.grid = 8;
    const ResultBundle bundle = run_analysis(doc);
    const std::string vtk = results_to_vtk(bundle);
    EXPECT_NE(vtk.find("POINTS 81 float"), std::string::npos);
    EXPECT_NE(vtk.find("SCALARS mode_1_w0 float 1"), std::string::npos);
    EXPECT_NE(vtk.find("SCALARS mode_3_w0 float 1"), std::string::npos);
    EXPECT_EQ(vtk.find("SCALARS mode_4_w0"), std::string::npos);
    EXPECT_NE(vtk.find("CELL_TYPES 64"), std::string::npos);
}

TEST(RunAnalysis, ReExportIsByteIdentical) {
    ModelDocument doc = parse_model_text(kMinimalRectangle);
    doc.analysis.n_modes = 2;
    doc.analysis.subdiv_u = doc.analysis.subdiv_v = 5;
    doc.analysis.grid = 8;
    const ResultBundle a = run_analysis(doc);
    const ResultBundle b = run_analysis(doc);
    EXPECT_EQ(results_to_csv(a), results_to_csv(b));
    EXPECT_EQ(results_to_vtk(a), results_to_vtk(b));
}

TEST(Cli, ExitCodesFollowContract) {
    const fs::path good = temp_file("igavib_good.json", kMinimalRectangle);
    EXPECT_EQ(run_cli("validate " + good.string()), 0);
    EXPECT_EQ(run_cli("validate /nonexistent/igavib_missing.json"), 2);

    const fs::path bad = temp_file("igavib_bad.json", "{ nope");
    EXPECT_EQ(run_cli("validate " + bad.string()), 2);

    // numerically invalid: stiffener path leaves the panel
    const std::string escaping = R"({
      "geometry": {"kind": "rectangle", "a": 1.0, "b": 1.0},
      "layup": {"material": {"E": 200e9, "nu": 0.3, "rho": 8000}, "thickness": 0.01},
      "stiffeners": [{
        "path": {"points": [[-0.5, 0.5], [0.5, 0.8], [1.5, 0.5]]},
        "section": {"b_s": 0.005, "h_s": 0.02},
        "material": {"E": 70e9, "nu": 0.3, "rho": 2700}
      }],
      "analysis": {"n_modes": 1, "subdivisions": [3, 3], "grid": 4}
    })";
    const fs::path esc = temp_file("igavib_escaping.json", escaping);
    EXPECT_EQ(run_cli("analyze " + esc.string() + " --out /tmp/igavib_test_out"), 3);

    const fs::path ok = temp_file("igavib_ok.json", R"({
      "geometry": {"kind": "rectangle", "a": 1.0, "b": 1.0},
      "layup": {"material": {"E": 200e9, "nu": 0.3, "rho": 8000}, "thickness": 0.01},
      "analysis": {"n_modes": 2, "subdivisions": [5, 5], "grid": 4}
    })");
    EXPECT_EQ(run_cli("analyze " + ok.string() + " --out /tmp/igavib_test_out"), 0);
    EXPECT_EQ(run_cli("fixtures list"), 0);
    EXPECT_EQ(run_cli("fixtures emit heart-isotropic-ssss --out /tmp/igavib_test_out/heart.json"),
              0);
    EXPECT_EQ(run_cli("fixtures emit no-such-fixture"), 2);
}
