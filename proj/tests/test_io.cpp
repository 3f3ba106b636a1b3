// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include <polmoments/io.hpp>

using namespace polmoments;
using io::Json;

TEST(Io, NumberFormatting) {
  EXPECT_EQ(io::format_number(-0.0), "0");
  EXPECT_EQ(io::format_number(1.0 / 3), "0.333333333333");
  EXPECT_EQ(io::format_number(-1e-20), "-1e-20");
  EXPECT_DOUBLE_EQ(io::round12(2.0000000000004), 2.0);
}

TEST(Io, ParseStateSpecs) {
  const auto fock = build(io::parse_state_spec(Json::parse(R"({"type":"fock","horizontal":2,"vertical":0})")));
  EXPECT_TRUE(fock.has_manifold(2));

  const auto coh = build(io::parse_state_spec(
      Json::parse(R"({"type":"su2_coherent","photons":2,"theta_degrees":90,"phi_degrees":0})")));
  const Vec3 s = stokes_vector(coh, MomentSelection::manifold(2));
  EXPECT_NEAR(s(0), 2.0, 1e-12);

  const auto mix = build(io::parse_state_spec(Json::parse(R"({"type":"mixture","components":[
      {"weight":0.5,"state":{"type":"fock","horizontal":2,"vertical":0}},
      {"weight":0.5,"state":{"type":"fock","horizontal":0,"vertical":2}}]})")));
  EXPECT_NEAR(mix.manifolds()[0].density.matrix()(0, 0).real(), 0.5, 1e-15);

  const auto ex = build(io::parse_state_spec(
      Json::parse(R"({"type":"explicit","photons":1,"matrix":[[0.5,[0,0.5]],[[0,-0.5],0.5]]})")));
  EXPECT_NEAR(ex.manifolds()[0].density.matrix()(0, 1).imag(), 0.5, 1e-15);

  const auto fam = build(io::parse_state_spec(Json::parse(R"({"type":"unpol_family","rho11":0.25})")));
  EXPECT_NEAR(fam.manifolds()[0].density.purity(), 0.25, 1e-14);

  const auto rot = build(io::parse_state_spec(Json::parse(
      R"({"type":"rotated","axis":[0,1,0],"angle_degrees":90,"state":{"type":"fock","horizontal":1,"vertical":0}})")));
  EXPECT_NEAR(stokes_vector(rot, MomentSelection::manifold(1))(0), 1.0, 1e-12);
}

TEST(Io, BadStateSpecs) {
  EXPECT_THROW(io::parse_state_spec(Json::parse(R"({"type":"banana"})")), SpecError);
  EXPECT_THROW(io::parse_state_spec(Json::parse(R"({"type":"fock","horizontal":"x","vertical":0})")), SpecError);
  EXPECT_THROW(io::parse_state_spec(Json::parse(R"({"horizontal":1})")), SpecError);
  EXPECT_THROW(build(io::parse_state_spec(Json::parse(R"({"type":"mixture","components":[
      {"weight":0.7,"state":{"type":"fock","horizontal":1,"vertical":0}}]})"))),
               SpecError);
  EXPECT_THROW(build(io::parse_state_spec(Json::parse(R"({"type":"explicit","photons":1,"matrix":[[1.5,0],[0,-0.5]]})"))),
               InvalidStateError);
}

TEST(Io, LoadJsonArgument) {
  EXPECT_EQ(io::load_json_argument(R"({"type":"nn","n":1})")["n"], 1);
  EXPECT_THROW(io::load_json_argument("/nonexistent/file.json"), IoError);
  EXPECT_THROW(io::load_json_argument("{not json"), SpecError);
  EXPECT_EQ(io::digest(Json::parse(R"({"a":1})")), io::digest(Json::parse(R"({ "a" : 1 })")));
}

TEST(Io, ObservationsRoundTrip) {
  MomentObservations obs;
  obs.manifold = 2;
  obs.items.push_back({Direction::from_angles(0.5, 1.0), 1, 0.25, 0.01});
  obs.items.push_back({Direction::from_angles(0.5, 1.0), 2, 3.5, std::nullopt});
  const auto text = io::format_observations(obs, false);
  EXPECT_EQ(text.find("# generated"), std::string::npos);
  const auto back = io::parse_observations(text);
  ASSERT_EQ(back.items.size(), 2u);
  EXPECT_EQ(back.manifold, 2);
  EXPECT_NEAR(back.items[0].direction.theta(), 0.5, 1e-12);
  EXPECT_NEAR(*back.items[0].stderr_value, 0.01, 1e-15);
  EXPECT_FALSE(back.items[1].stderr_value.has_value());

  const auto stamped = io::format_observations(obs, true);
  EXPECT_NE(stamped.find("# generated"), std::string::npos);
  EXPECT_EQ(io::parse_observations(stamped).items.size(), 2u);
}

TEST(Io, MalformedTables) {
  EXPECT_THROW(io::parse_observations("# columns theta phi order value stderr\n1 2 3\n"), SpecError);
  EXPECT_THROW(io::parse_observations("1 2 1 0.5 -\n"), SpecError);
}

TEST(Io, CountsRoundTrip) {
  CountsRecord r;
  r.direction = Direction::axis(1);
  r.run = 2;
  r.trials = 100;
  r.counts = {{2, 0, 10, 20.0}, {2, 1, 30, 31.5}, {2, 2, 5, 10.0}};
  const auto back = io::parse_counts(io::format_counts({r}, false));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].run, 2);
  EXPECT_EQ(back[0].trials, 100);
  ASSERT_EQ(back[0].counts.size(), 3u);
  EXPECT_EQ(back[0].counts[1].raw, 30);
  EXPECT_DOUBLE_EQ(back[0].counts[1].calibrated, 31.5);
}

TEST(Io, ScanRoundTrip) {
  const auto state = build(FockSpec{2, 0});
  const auto scan = sphere_scan(state, 2, LatLongGrid{3, 4}, MomentSelection::manifold(2));
  const auto text = io::format_scan(scan, {"abc", false});
  EXPECT_NE(text.find("# quantity central_moment"), std::string::npos);
  const auto rows = io::parse_scan(text);
  ASSERT_EQ(rows.size(), scan.directions.size());
  for (const auto& row : rows) EXPECT_NEAR(row.value, 2 * (1 - row.n(2) * row.n(2)), 1e-10);
  const auto odd = io::format_scan(sphere_scan(state, 3, LatLongGrid{3, 4}, MomentSelection::manifold(2)), {"abc", false});
  EXPECT_NE(odd.find("# quantity abs_central_moment"), std::string::npos);
}

TEST(Io, DirectionsRoundTrip) {
  const auto set = canonical_directions(3, DirectionVariant::Minimal);
  const auto back = io::parse_directions(io::format_directions(set, false));
  EXPECT_EQ(back.label, set.label);
  ASSERT_EQ(back.size(), set.size());
  for (std::size_t i = 0; i < set.size(); ++i) EXPECT_LT(back.directions[i].angle_to(set.directions[i]), 1e-11);
  EXPECT_EQ(io::resolve_directions("canonical-2nd").size(), 6u);
}

TEST(Io, DetectorConfigJson) {
  const auto c = io::parse_detector_config(Json::parse(
      R"({"preset":"hom20","trials":500,"runs":2,"seed":9,"class_overrides":[{"photons":2,"k":1,"efficiency":0.4}]})"));
  EXPECT_EQ(c.trials, 500);
  EXPECT_NEAR(c.channels[3], 0.57, 1e-15);
  EXPECT_NEAR(c.class_efficiency(2, 1), 0.4, 1e-15);
  const auto again = io::parse_detector_config(io::detector_config_to_json(c));
  EXPECT_EQ(again.seed, 9u);
  EXPECT_NEAR(again.class_efficiency(2, 1), 0.4, 1e-15);
  EXPECT_THROW(io::parse_detector_config(Json::parse(R"({"channels":[1,1,1]})")), SpecError);
}

TEST(Io, ReportsRoundTripTensors) {
  const auto state = build(Su2CoherentSpec{2, 0.3, 0.2});
  const auto t = moment_tensors(state, 3, MomentSelection::manifold(2));
  const auto rep = io::moments_report(state, t, uncertainty_check(state, 2));
  EXPECT_EQ(rep["kind"], "moments");
  const auto back = io::tensors_from_report(rep);
  EXPECT_EQ(back.manifold, 2);
  for (int r = 1; r <= 3; ++r)
    for (std::size_t i = 0; i < t.raw[r - 1].size(); ++i) EXPECT_NEAR(back.raw[r - 1][i], t.raw[r - 1][i], 1e-11);
  EXPECT_THROW(io::tensors_from_report(Json::parse("{}")), SpecError);
}

TEST(Io, ParameterCountsReport) {
  const auto j = io::parameter_counts_report(parameter_counts(3));
  EXPECT_EQ(j["cumulative"], 19);
  EXPECT_EQ(j["full_tomography"], 99);
  EXPECT_EQ(j["state_parameters"], 15);
}
