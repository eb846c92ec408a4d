#include <gtest/gtest.h>

#include <filesystem>
#include <numbers>

#include "slitscat/config.hpp"

using namespace slitscat;
using nlohmann::json;

namespace {

json minimal() {
    return json::parse(R"({
        "schema_version": 1,
        "scatterer": {"position": [1.5, 0], "outer_radius": 0.0275, "wall_thickness": 0.002,
                      "slits": {"count": 4, "width": 0.004}},
        "receiver": [1.5775, 0]
    })");
}

}  // namespace

TEST(Config, MinimalSingleScatterer) {
    const RunConfig c = parse_config(minimal());
    ASSERT_TRUE(c.scatterer.has_value());
    EXPECT_FALSE(c.array.has_value());
    EXPECT_EQ(c.scatterer->ring.slits.size(), 4u);
    EXPECT_NEAR(c.scatterer->ring.slit_width(0), 0.004, 1e-15);
    ASSERT_EQ(c.receivers.size(), 1u);
    EXPECT_EQ(c.solver.truncation, 35);
    EXPECT_EQ(c.solver.variant, VariantSelection::Full);
    EXPECT_TRUE(validate(c).empty());
}

TEST(Config, AngleUnits) {
    json j = minimal();
    j["scatterer"]["slits"] = json::parse(R"([{"center": "90deg", "width": 0.004}, {"center": 3.0, "angular_width": "0.1rad"}])");
    const RunConfig c = parse_config(j);
    ASSERT_EQ(c.scatterer->ring.slits.size(), 2u);
    EXPECT_NEAR(c.scatterer->ring.slits[0].center, std::numbers::pi / 2, 1e-15);
    EXPECT_NEAR(c.scatterer->ring.slits[1].width, 0.1, 1e-15);
    j["scatterer"]["slits"][0]["center"] = "90 furlongs";
    EXPECT_THROW(parse_config(j), ConfigError);
}

TEST(Config, CoresAndMaterials) {
    json j = minimal();
    j["scatterer"]["core"] = {{"type", "rigid"}, {"radius", 0.011}};
    EXPECT_NEAR(std::get<RigidCore>(parse_config(j).scatterer->core).radius, 0.011, 1e-15);
    j["scatterer"]["core"] = json::parse(R"({"type": "shell", "outer_radius": 0.02, "thickness": 0.00025,
        "material": {"youngs_modulus": [3.8e6, -1e5], "poisson_ratio": 0.49, "density": 1000}})");
    const auto shell = std::get<ElasticShell>(parse_config(j).scatterer->core);
    EXPECT_DOUBLE_EQ(shell.material.youngs_modulus.imag(), -1e5);
    j["scatterer"]["core"]["material"] = "latex";
    EXPECT_NEAR(std::get<ElasticShell>(parse_config(j).scatterer->core).material.density, 1100.0, 1e-12);
    j["scatterer"]["core"]["material"] = "unobtainium";
    EXPECT_THROW(parse_config(j), ConfigError);
    j["scatterer"]["core"] = {{"type", "foam"}};
    EXPECT_THROW(parse_config(j), ConfigError);
}

TEST(Config, StructuralErrors) {
    EXPECT_THROW(parse_config(json::array()), ConfigError);
    json j = minimal();
    j["schema_version"] = 2;
    EXPECT_THROW(parse_config(j), ConfigError);
    j = minimal();
    j["array"] = json::object();
    EXPECT_THROW(parse_config(j), ConfigError);
    j = minimal();
    j["solver"] = {{"variant", "exact"}};
    EXPECT_THROW(parse_config(j), ConfigError);
    j = minimal();
    j["scatterer"].erase("outer_radius");
    EXPECT_THROW(parse_config(j), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/file.json"), ConfigError);
}

TEST(Config, SemanticValidation) {
    json j = minimal();
    j["sweep"] = {{"f_min", 500}, {"f_max", 400}, {"step", 5}};
    EXPECT_TRUE(has_errors(validate(parse_config(j))));
    j = minimal();
    j["receiver"] = {1.5, 0.0};
    EXPECT_TRUE(has_errors(validate(parse_config(j))));
    j = minimal();
    j["scatterer"]["core"] = {{"type", "rigid"}, {"radius", 0.03}};
    EXPECT_TRUE(has_errors(validate(parse_config(j))));
}

TEST(Config, ExplicitArrayList) {
    json j = minimal();
    const json proto = j["scatterer"];
    j.erase("scatterer");
    json a = proto, b = proto;
    b["position"] = {1.6, 0.0};
    j["array"] = {{"scatterers", {a, b}}};
    j["receiver"] = {1.75, 0.0};
    const RunConfig c = parse_config(j);
    ASSERT_TRUE(c.array.has_value());
    EXPECT_EQ(c.array->size(), 2u);
    EXPECT_TRUE(validate(c).empty());
}

TEST(Config, ShippedPresetsLoadAndValidate) {
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(SLITSCAT_PRESET_DIR)) {
        if (entry.path().extension() != ".json") continue;
        const RunConfig c = load_config(entry.path().string());
        EXPECT_FALSE(has_errors(validate(c))) << entry.path() << ": " << describe(validate(c));
        EXPECT_FALSE(c.receivers.empty()) << entry.path();
        EXPECT_TRUE(c.scatterer.has_value() != c.array.has_value()) << entry.path();
        EXPECT_EQ(c.name, entry.path().stem().string());
        ++count;
    }
    EXPECT_EQ(count, 12);
}

TEST(Config, ArrayPresetGeometry) {
    const RunConfig c = load_config(std::string(SLITSCAT_PRESET_DIR) + "/fig6b.json");
    ASSERT_TRUE(c.array.has_value());
    EXPECT_EQ(c.array->size(), 21u);
    EXPECT_EQ(c.solver.variant, VariantSelection::Both);
    EXPECT_EQ(truncation_for(c.solver, ModelVariant::Approx), 6);
    EXPECT_EQ(truncation_for(c.solver, ModelVariant::Full), 35);
}
