// Copyright 2026 The lossychain Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// lossychain command-line front end.

#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lossychain/app.hpp"

namespace app = lossychain::app;

namespace {

int report(const app::RunResult& r) {
  if (r.exit_code != app::ok) {
    std::cerr << r.error_record << '\n';
    return r.exit_code;
  }
  for (const auto& f : r.files) std::cout << f << '\n';
  return app::ok;
}

int print_manifest(const std::string& format, const std::string& seed) {
  const auto m = app::figure_manifest(seed);
  if (format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& f : m) {
      nlohmann::ordered_json e;
      e["id"] = f.id;
      e["description"] = f.description;
      for (const auto& p : f.panels) e["panels"].push_back({{"id", p.id}, {"args", p.args}});
      j.push_back(e);
    }
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << app::manifest_text(m);
  }
  return app::ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Dissipative Bose-Hubbard chain experiments"};
  cli.require_subcommand(1);
  cli.set_version_flag("--version", std::string("lossychain ") + app::version);

  if (argc > 1 && argv[1][0] != '-') {
    const std::string name = argv[1];
    if (!app::find_command(name) && name != "run" && name != "manifest") {
      std::cerr << app::error_record("unknown_subcommand", app::unknown_subcommand,
                                     "unknown subcommand '" + name + "'")
                << '\n';
      return app::unknown_subcommand;
    }
  }

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, CLI::App*> subs;
  for (const auto& spec : app::command_specs()) {
    CLI::App* sub = cli.add_subcommand(spec.name, spec.help);
    subs[spec.name] = sub;
    auto& store = values[spec.name];
    for (const auto& o : spec.options) {
      std::string help = o.help;
      if (!o.default_value.empty()) help += " [" + o.default_value + "]";
      sub->add_option(app::flag(o.key), store[o.key], help);
    }
    sub->add_option("--out-dir", store["out_dir"], "output directory [.]");
  }

  std::string config_path;
  CLI::App* run = cli.add_subcommand("run", "run a saved configuration");
  run->add_option("--config", config_path, "config file")->required();

  std::string format = "text", seed = "7";
  CLI::App* manifest = cli.add_subcommand("manifest", "figure id to command mapping");
  manifest->add_option("--format", format, "text | json")->check(CLI::IsMember({"text", "json"}));
  manifest->add_option("--seed", seed, "seed used by randomised panels");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return cli.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app::error_record("invalid_parameter", app::invalid_parameter, e.what()) << '\n';
    return app::invalid_parameter;
  }

  if (*run) return report(app::run_file(config_path));
  if (*manifest) return print_manifest(format, seed);

  for (const auto& [name, sub] : subs) {
    if (!*sub) continue;
    lossychain::ExperimentConfig cfg;
    cfg.command = name;
    for (const auto& [key, value] : values[name]) {
      const std::string f = key == "out_dir" ? "--out-dir" : app::flag(key);
      if (sub->count(f) > 0) cfg.params[key] = value;
    }
    return report(app::run(cfg));
  }
  return app::unknown_subcommand;
}
