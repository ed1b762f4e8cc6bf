#include "twave_cli/config_io.hpp"

#include <fstream>
#include <set>

#include "twave/errors.hpp"

namespace twave::cli {

using nlohmann::json;

namespace {

using QTable = std::array<std::array<std::array<double, 2>, 2>, 2>;

std::string form_name(NullFormSpec::Mode m) {
  switch (m) {
    case NullFormSpec::Mode::paper_null: return "null";
    case NullFormSpec::Mode::sign_flipped: return "sign_flipped";
    case NullFormSpec::Mode::custom: return "custom";
  }
  return "custom";
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw SchemaError(where + ": unknown key '" + k + "'");
}

template <class T>
T read(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw SchemaError(where + "." + key + ": wrong type");
  }
}

}  // namespace

std::string to_string(DataFamily f) {
  switch (f) {
    case DataFamily::gaussian: return "gaussian";
    case DataFamily::right_moving: return "right_moving";
    case DataFamily::random: return "random";
  }
  return "gaussian";
}

std::string to_string(DataNormalization n) { return n == DataNormalization::data_norms ? "norms" : "amplitude"; }

json to_json(const SimConfig& c) {
  QTable q{};
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) q[a][i][k] = c.nf.qij[a][i][k];
  json nl = {{"form", form_name(c.nf.mode)}, {"q", q}};
  if (c.nf.mode == NullFormSpec::Mode::custom) {
    nl["time_coeff"] = c.nf.time_coeff;
    nl["x1_coeff"] = c.nf.x1_coeff;
  }
  return {
      {"schema_version", kSchemaVersion},
      {"grid", {{"n", c.grid.dims()}, {"length", c.grid.lengths()}}},
      {"speeds", {c.speeds.c1(), c.speeds.c2()}},
      {"nonlinearity", nl},
      {"data",
       {{"family", to_string(c.family)},
        {"normalization", to_string(c.normalization)},
        {"sigma", c.sigma},
        {"xi0", c.xi0}}},
      {"eps0", c.eps0},
      {"dt", c.dt},
      {"t_final", c.t_final},
      {"dealias", c.dealias},
      {"sobolev_order", c.sobolev_order},
      {"alpha", c.alpha},
      {"delta", c.delta},
      {"seed", c.seed},
      {"frame_interval", c.frame_interval},
      {"checkpoint_levels", c.checkpoint_levels},
      {"max_halvings", c.max_halvings},
      {"compute_z", c.compute_z},
  };
}

SimConfig sim_config_from_json(const json& j) {
  check_keys(j,
             {"schema_version", "grid", "speeds", "nonlinearity", "data", "eps0", "dt", "t_final", "dealias",
              "sobolev_order", "alpha", "delta", "seed", "frame_interval", "checkpoint_levels", "max_halvings",
              "compute_z"},
             "config");
  const int version = read<int>(j, "schema_version", kSchemaVersion, "config");
  if (version != kSchemaVersion) throw SchemaError("config: unsupported schema_version " + std::to_string(version));

  SimConfig c;
  try {
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      check_keys(g, {"n", "length"}, "grid");
      const auto n = read<std::array<int, 3>>(g, "n", c.grid.dims(), "grid");
      const auto len = read<std::array<double, 3>>(g, "length", c.grid.lengths(), "grid");
      c.grid = Grid(n, len);
    }
    if (j.contains("speeds")) {
      const auto sp = read<std::array<double, 2>>(j, "speeds", {}, "config");
      c.speeds = WaveSpeeds::make(sp[0], sp[1]);
    }
    if (j.contains("nonlinearity")) {
      const json& nl = j.at("nonlinearity");
      check_keys(nl, {"form", "time_coeff", "x1_coeff", "q"}, "nonlinearity");
      const auto form = read<std::string>(nl, "form", "null", "nonlinearity");
      const auto q = read<QTable>(nl, "q", QTable{}, "nonlinearity");
      if (form == "null") {
        c.nf = NullFormSpec::paper_null(q);
      } else if (form == "sign_flipped") {
        c.nf = NullFormSpec::sign_flipped(q);
      } else if (form == "custom") {
        c.nf = NullFormSpec::custom(read<double>(nl, "time_coeff", 1.0, "nonlinearity"),
                                    read<double>(nl, "x1_coeff", -1.0, "nonlinearity"), q);
      } else {
        throw SchemaError("nonlinearity.form: expected null, sign_flipped or custom");
      }
      if (form != "custom" && (nl.contains("time_coeff") || nl.contains("x1_coeff")))
        throw SchemaError("nonlinearity: coefficients are only settable with form = custom");
    }
    if (j.contains("data")) {
      const json& d = j.at("data");
      check_keys(d, {"family", "normalization", "sigma", "xi0"}, "data");
      const auto fam = read<std::string>(d, "family", to_string(c.family), "data");
      if (fam == "gaussian") c.family = DataFamily::gaussian;
      else if (fam == "right_moving") c.family = DataFamily::right_moving;
      else if (fam == "random") c.family = DataFamily::random;
      else throw SchemaError("data.family: expected gaussian, right_moving or random");
      const auto norm = read<std::string>(d, "normalization", to_string(c.normalization), "data");
      if (norm == "norms") c.normalization = DataNormalization::data_norms;
      else if (norm == "amplitude") c.normalization = DataNormalization::amplitude;
      else throw SchemaError("data.normalization: expected norms or amplitude");
      c.sigma = read<double>(d, "sigma", c.sigma, "data");
      c.xi0 = read<Vec3>(d, "xi0", c.xi0, "data");
    }
  } catch (const UsageError& e) {
    throw SchemaError(e.what());
  }
  c.eps0 = read<double>(j, "eps0", c.eps0, "config");
  c.dt = read<double>(j, "dt", c.dt, "config");
  c.t_final = read<double>(j, "t_final", c.t_final, "config");
  c.dealias = read<double>(j, "dealias", c.dealias, "config");
  c.sobolev_order = read<int>(j, "sobolev_order", c.sobolev_order, "config");
  c.alpha = read<double>(j, "alpha", c.alpha, "config");
  c.delta = read<double>(j, "delta", c.delta, "config");
  c.seed = read<std::uint64_t>(j, "seed", c.seed, "config");
  c.frame_interval = read<double>(j, "frame_interval", c.frame_interval, "config");
  c.checkpoint_levels = read<int>(j, "checkpoint_levels", c.checkpoint_levels, "config");
  c.max_halvings = read<int>(j, "max_halvings", c.max_halvings, "config");
  c.compute_z = read<bool>(j, "compute_z", c.compute_z, "config");
  try {
    c.validate();
  } catch (const UsageError& e) {
    throw SchemaError(e.what());
  }
  return c;
}

SimConfig load_sim_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw SchemaError("cannot open config " + path);
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("config is not valid JSON: ") + e.what());
  }
  return sim_config_from_json(j);
}

}  // namespace twave::cli
