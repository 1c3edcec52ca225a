#include <map>
#include <string>

#include "igavib/model.hpp"

namespace igavib {

namespace {

// Complicated-cutout inner profile shipped verbatim (17 control points,
// degree 2, doubled interior knots -> 8 coarse elements).
const char* kHeartInnerCurveJson = R"raw({
        "degree": 2,
        "knots": [0, 0, 0, 0.125, 0.125, 0.25, 0.25, 0.375, 0.375, 0.5, 0.5, 0.625, 0.625, 0.75, 0.75, 0.875, 0.875, 1, 1, 1],
        "points": [
          [6, 8, 0, 1],
          [5, 8, 0, 1],
          [4, 8, 0, 1],
          [3, 8, 0, 1],
          [2, 8, 0, 1],
          [2, 7, 0, 1],
          [2, 6, 0, 1],
          [2, 5, 0, 1],
          [2, 4, 0, 1],
          [1.414, 1.414, 0, 0.707],
          [4, 2, 0, 1],
          [4.243, 1.414, 0, 0.707],
          [6, 4, 0, 1],
          [5.657, 2.828, 0, 0.707],
          [8, 6, 0, 1],
          [5.657, 5.657, 0, 0.707],
          [6, 8, 0, 1]
        ]
      })raw";

const char* kSquareOuterCurveJson = R"raw({
        "degree": 2,
        "knots": [0, 0, 0, 0.25, 0.25, 0.5, 0.5, 0.75, 0.75, 1, 1, 1],
        "points": [
          [10, 10, 0, 1],
          [5, 10, 0, 1],
          [0, 10, 0, 1],
          [0, 5, 0, 1],
          [0, 0, 0, 1],
          [5, 0, 0, 1],
          [10, 0, 0, 1],
          [10, 5, 0, 1],
          [10, 10, 0, 1]
        ]
      })raw";

std::string heart_geometry_block() {
    return std::string(R"raw({
    "kind": "ruled_cutout",
    "outer": {
      "curve": )raw") + kSquareOuterCurveJson + R"raw(
    },
    "inner": {
      "curve": )raw" + kHeartInnerCurveJson + R"raw(
    }
  })raw";
}

std::string angleply_fixture(const char* name, const char* angles) {
    return std::string(R"raw({
  "name": ")raw") + name + R"raw(",
  "geometry": )raw" + heart_geometry_block() + R"raw(,
  "layup": {
    "material": {
      "E_L_over_E_T": 2.45,
      "G_LT_over_E_T": 0.48,
      "G_TT_over_E_T": 0.2,
      "nu_LT": 0.23,
      "E_T": 10000000000.0,
      "rho": 8000
    },
    "angles_deg": )raw" + angles + R"raw(,
    "thickness": 0.06
  },
  "stiffeners": [],
  "boundary": "ssss",
  "analysis": {
    "n_modes": 6,
    "subdivisions": [7, 31],
    "normalization": {"scheme": "orthotropic_sqrt", "a": 10},
    "grid": 64
  }
}
)raw";
}

std::string ellipse_fixture(const char* name, const char* angles, const char* gamma,
                            const char* delta_eps) {
    return std::string(R"raw({
  "name": ")raw") + name + R"raw(",
  "geometry": {
    "kind": "ruled_cutout",
    "outer": {"rectangle": {"a": 1, "b": 1}},
    "inner": {"hole": {"shape": "ellipse", "center": [0.5, 0.5], "rx": 0.2, "ry": 0.1}}
  },
  "layup": {
    "material": {
      "E_L_over_E_T": 15,
      "G_LT_over_E_T": 0.5,
      "G_TT_over_E_T": 0.3356,
      "nu_LT": 0.3,
      "E_T": 10000000000.0,
      "rho": 8000
    },
    "angles_deg": )raw" + angles + R"raw(,
    "thickness": 0.01
  },
  "stiffeners": [
    {
      "path": {"delta_eps": )raw" + delta_eps + R"raw(, "delta_dist": 0.25},
      "section": {"gamma": )raw" + gamma + R"raw(, "delta": 0.1},
      "material": {"E": 10000000000.0, "nu": 0.3, "rho": 8000}
    }
  ],
  "boundary": "cccc",
  "analysis": {
    "n_modes": 5,
    "subdivisions": [15, 11],
    "normalization": {"scheme": "orthotropic_sqrt", "a": 1},
    "grid": 64
  }
}
)raw";
}

std::map<std::string, std::string> build_fixtures() {
    std::map<std::string, std::string> f;

    f["rectangle-ssss-example"] = R"raw({
  "name": "rectangle-ssss-example",
  "geometry": {"kind": "rectangle", "a": 1, "b": 1},
  "layup": {
    "material": {"E": 200000000000.0, "nu": 0.3, "rho": 8000},
    "angles_deg": [0],
    "thickness": 0.01
  },
  "stiffeners": [],
  "boundary": "ssss",
  "analysis": {
    "n_modes": 4,
    "subdivisions": [15, 15],
    "normalization": {"scheme": "isotropic_quartic", "a": 1},
    "grid": 32
  }
}
)raw";

    f["circular-hole-clamped"] = R"raw({
  "name": "circular-hole-clamped",
  "geometry": {
    "kind": "ruled_cutout",
    "outer": {"rectangle": {"a": 10, "b": 10}},
    "inner": {"hole": {"shape": "circle", "center": [5, 5], "radius": 1}}
  },
  "layup": {
    "material": {"E": 208000000000.0, "nu": 0.3, "rho": 8000},
    "angles_deg": [0],
    "thickness": 0.1
  },
  "stiffeners": [],
  "boundary": "cccc",
  "analysis": {
    "n_modes": 8,
    "subdivisions": [15, 15],
    "normalization": {"scheme": "isotropic_quartic", "a": 10},
    "grid": 64
  }
}
)raw";

    f["heart-isotropic-ssss"] = std::string(R"raw({
  "name": "heart-isotropic-ssss",
  "geometry": )raw") + heart_geometry_block() + R"raw(,
  "layup": {
    "material": {"E": 200000000000.0, "nu": 0.3, "rho": 8000},
    "angles_deg": [0],
    "thickness": 0.05
  },
  "stiffeners": [],
  "boundary": "ssss",
  "analysis": {
    "n_modes": 10,
    "subdivisions": [7, 31],
    "normalization": {"scheme": "isotropic_quartic", "a": 10},
    "grid": 64
  }
}
)raw";

    f["heart-angleply-15"] = angleply_fixture("heart-angleply-15", "[15, -15, 15]");
    f["heart-angleply-30"] = angleply_fixture("heart-angleply-30", "[30, -30, 30]");
    f["heart-angleply-45"] = angleply_fixture("heart-angleply-45", "[45, -45, 45]");

    f["stiffened-circular-clamped"] = R"raw({
  "name": "stiffened-circular-clamped",
  "geometry": {
    "kind": "ruled_cutout",
    "outer": {"rectangle": {"a": 1, "b": 1}},
    "inner": {"hole": {"shape": "circle", "center": [0.5, 0.5], "radius": 0.1}}
  },
  "layup": {
    "material": {
      "E_L_over_E_T": 15,
      "G_LT_over_E_T": 0.5,
      "G_TT_over_E_T": 0.3356,
      "nu_LT": 0.3,
      "E_T": 10000000000.0,
      "rho": 8000
    },
    "angles_deg": [0, 90, 90, 0],
    "thickness": 0.01
  },
  "stiffeners": [
    {
      "path": {"delta_eps": 0.0, "delta_dist": 0.25},
      "section": {"gamma": 5, "delta": 0.1},
      "material": {"E": 10000000000.0, "nu": 0.3, "rho": 8000}
    }
  ],
  "boundary": "cccc",
  "analysis": {
    "n_modes": 5,
    "subdivisions": [15, 15],
    "normalization": {"scheme": "orthotropic_sqrt", "a": 1},
    "grid": 64
  }
}
)raw";

    const char* kAnticross = "[0, 90, 0, 90]";
    const char* kSymcross = "[0, 90, 90, 0]";
    const char* kSymangle = "[45, -45, -45, 45]";
    const char* kAntiangle = "[45, -45, 45, -45]";
    f["stiffened-ellipse-anticross-g5-e0"] =
        ellipse_fixture("stiffened-ellipse-anticross-g5-e0", kAnticross, "5", "0.0");
    f["stiffened-ellipse-symcross-g5-e0"] =
        ellipse_fixture("stiffened-ellipse-symcross-g5-e0", kSymcross, "5", "0.0");
    f["stiffened-ellipse-symangle-g5-e0"] =
        ellipse_fixture("stiffened-ellipse-symangle-g5-e0", kSymangle, "5", "0.0");
    f["stiffened-ellipse-antiangle-g5-e0"] =
        ellipse_fixture("stiffened-ellipse-antiangle-g5-e0", kAntiangle, "5", "0.0");
    f["stiffened-ellipse-anticross-g10-e25"] =
        ellipse_fixture("stiffened-ellipse-anticross-g10-e25", kAnticross, "10", "0.25");
    f["stiffened-ellipse-symcross-g10-e25"] =
        ellipse_fixture("stiffened-ellipse-symcross-g10-e25", kSymcross, "10", "0.25");
    f["stiffened-ellipse-symangle-g10-e25"] =
        ellipse_fixture("stiffened-ellipse-symangle-g10-e25", kSymangle, "10", "0.25");
    f["stiffened-ellipse-antiangle-g10-e25"] =
        ellipse_fixture("stiffened-ellipse-antiangle-g10-e25", kAntiangle, "10", "0.25");
    return f;
}

const std::map<std::string, std::string>& fixtures() {
    static const std::map<std::string, std::string> f = build_fixtures();
    return f;
}

}  // namespace

std::vector<std::string> fixture_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : fixtures()) names.push_back(k);
    return names;
}

std::string fixture_text(const std::string& name) {
    const auto& f = fixtures();
    auto it = f.find(name);
    if (it == f.end()) throw InputError("unknown fixture '" + name + "'");
    return it->second;
}

}  // namespace igavib
