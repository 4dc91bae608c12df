#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "lfw/spec.hpp"

using namespace lfw;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::pair<long, long> parse_pair(const std::string& text, const std::string& sep) {
  const auto at = text.find(sep);
  if (at == std::string::npos) throw CLI::ValidationError("expected a" + sep + "b, got " + text);
  return {std::stol(text.substr(0, at)), std::stol(text.substr(at + sep.size()))};
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void emit(const Json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
  } else {
    std::ofstream(path) << text;
  }
}

int run_document(const std::string& path, const std::string& json_out, const std::string& format, std::uint64_t seed,
                 std::set<Directive::Verb> only) {
  const SpecDocument doc = parse_spec(read_file(path));
  RunOptions opts;
  opts.seed = seed;
  opts.only = std::move(only);
  const Report rep = run(doc, opts);
  if (format == "json") {
    std::cout << rep.json.dump(2) << "\n";
  } else {
    std::cout << rep.text;
  }
  if (!json_out.empty()) emit(rep.json, json_out);
  return rep.passed ? 0 : 1;
}

// Sets named in `use`, or every set binding in definition order.
std::vector<ClopenSet> pick_sets(const Bindings& b, const std::vector<std::string>& use) {
  std::vector<ClopenSet> out;
  auto add = [&](const std::vector<ClopenSet>& g) { out.insert(out.end(), g.begin(), g.end()); };
  if (use.empty()) {
    for (const auto& [name, g] : b.sets) add(g);
    return out;
  }
  for (const auto& n : use) {
    const auto it = std::find_if(b.sets.begin(), b.sets.end(), [&](const auto& e) { return e.first == n; });
    if (it == b.sets.end()) throw std::invalid_argument("no set named " + n);
    add(it->second);
  }
  return out;
}

std::vector<StepFunction> pick_functions(const Bindings& b, const std::vector<std::string>& use) {
  std::vector<StepFunction> out;
  auto find_fn = [&](const std::string& n) -> const StepFunction* {
    for (const auto& [name, f] : b.fns) {
      if (name == n) return &f;
    }
    return nullptr;
  };
  if (use.empty()) {
    for (const auto& [name, g] : b.sets) {
      for (const auto& s : g) out.push_back(StepFunction::indicator(s));
    }
    for (const auto& [name, f] : b.fns) out.push_back(f);
    return out;
  }
  for (const auto& n : use) {
    if (const auto* f = find_fn(n)) {
      out.push_back(*f);
    } else {
      for (const auto& s : pick_sets(b, {n})) out.push_back(StepFunction::indicator(s));
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact wavelet sets and super-wavelets over GF(q)((p))"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string json_out;
  std::string format = "text";
  std::uint64_t seed = 0;

  auto* check = app.add_subcommand("check", "Run every directive of a spec file");
  check->add_option("spec", spec_path, "Spec file")->required()->check(CLI::ExistingFile);
  check->add_option("--json", json_out, "Also write the JSON report here");
  check->add_option("--format", format, "Report on stdout: text or json")->check(CLI::IsMember({"text", "json"}));
  check->add_option("--seed", seed, "Seed for simulate directives without one");

  auto* bound = app.add_subcommand("bound", "Run the bound directives of a spec file");
  bound->add_option("spec", spec_path, "Spec file")->required()->check(CLI::ExistingFile);
  bound->add_option("--json", json_out, "Also write the JSON report here");
  bound->add_option("--format", format, "Report on stdout: text or json")->check(CLI::IsMember({"text", "json"}));

  auto* print = app.add_subcommand("print", "Print a spec file in canonical form");
  print->add_option("spec", spec_path, "Spec file")->required()->check(CLI::ExistingFile);

  std::string kind;
  unsigned p = 2;
  unsigned c = 1;
  std::vector<unsigned> modulus;
  int m = 1;
  int n = 2;
  auto* construct = app.add_subcommand("construct", "Print a standard family as set JSON");
  construct->add_option("kind", kind, "shannon | annulus | scaled-shannon | shell-super | missing-component")
      ->required()
      ->check(CLI::IsMember({"shannon", "annulus", "scaled-shannon", "shell-super", "missing-component"}));
  construct->add_option("--p", p, "Characteristic")->required();
  construct->add_option("--c", c, "Residue degree");
  construct->add_option("--modulus", modulus, "Modulus coefficients, low to high")->delimiter(',');
  construct->add_option("--m", m, "Shell index for annulus and scaled-shannon");
  construct->add_option("--n", n, "Length for shell-super and missing-component");

  std::string shells = "-3..3";
  int max_scale = 5;
  std::string use;
  std::string target;
  long nodes = SolveLimits{}.max_nodes;
  long time_ms = SolveLimits{}.time_limit.count();
  auto* solve = app.add_subcommand("solve", "Complete a packing family by exact cover");
  solve->add_option("--existing", spec_path, "Spec file defining the existing sets")->required()->check(CLI::ExistingFile);
  solve->add_option("--use", use, "Comma-separated set names; default all sets in order");
  solve->add_option("--shells", shells, "Shell range a..b");
  solve->add_option("--max-scale", max_scale, "Finest ball scale");
  solve->add_option("--target", target, "Name of a set to use as fold target");
  solve->add_option("--nodes", nodes, "Search node cap");
  solve->add_option("--time-ms", time_ms, "Search time cap in milliseconds");

  std::string sim_kind;
  std::string window = "3,3";
  std::size_t trials = 100;
  bool super = false;
  std::string at = "0,0";
  std::string with = "0,0";
  auto* simulate = app.add_subcommand("simulate", "Brute-force affine system checks on a finite window");
  simulate->add_option("kind", sim_kind, "parseval | gram")->required()->check(CLI::IsMember({"parseval", "gram"}));
  simulate->add_option("--family", spec_path, "Spec file defining the family")->required()->check(CLI::ExistingFile);
  simulate->add_option("--use", use, "Comma-separated names; default all sets then functions");
  simulate->add_option("--window", window, "R,S");
  simulate->add_option("--trials", trials, "Random step functions");
  simulate->add_option("--seed", seed, "Random seed");
  simulate->add_flag("--super", super, "Treat the family as one super-wavelet tuple");
  simulate->add_option("--at", at, "j,k of the first affine function (gram)");
  simulate->add_option("--with", with, "j,k of the second affine function (gram)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) return run_document(spec_path, json_out, format, seed, {});
    if (*bound) return run_document(spec_path, json_out, format, seed, {Directive::Verb::Bound});
    if (*print) {
      std::cout << print_spec(parse_spec(read_file(spec_path)));
      return 0;
    }
    if (*construct) {
      auto field = FieldConfig::make(p, c, modulus);
      Json out = Json::array();
      auto add_all = [&](const std::vector<ClopenSet>& sets) {
        for (const auto& s : sets) out.push_back(to_json(s));
      };
      if (kind == "shannon") add_all(shannon_multiwavelet(field));
      if (kind == "annulus") add_all({annulus_wavelet(field, m)});
      if (kind == "scaled-shannon") add_all(scaled_shannon(field, m));
      if (kind == "shell-super") add_all(shell_superwavelet(field, n));
      if (kind == "missing-component") {
        const auto fam = missing_component_family(field, n);
        add_all(fam.existing);
        Json j;
        j["existing"] = out;
        j["printed_target"] = to_json(fam.printed_target);
        j["corrected_target"] = to_json(fam.corrected_target);
        out = j;
      }
      emit(out, "");
      return 0;
    }
    if (*solve) {
      const Bindings b = evaluate_definitions(parse_spec(read_file(spec_path)));
      SolveRequest req;
      req.existing = pick_sets(b, split_names(use));
      const auto [lo, hi] = parse_pair(shells, "..");
      req.shell_lo = static_cast<int>(lo);
      req.shell_hi = static_cast<int>(hi);
      req.max_scale = max_scale;
      if (!target.empty()) {
        const auto t = pick_sets(b, {target});
        if (t.size() != 1) throw std::invalid_argument("target must name a single set");
        req.target = t.front();
        const auto pos = std::find(req.existing.begin(), req.existing.end(), t.front());
        if (use.empty() && pos != req.existing.end()) req.existing.erase(pos);
      }
      req.limits.max_nodes = nodes;
      req.limits.time_limit = std::chrono::milliseconds(time_ms);
      const auto r = solve_complement(req);
      emit(to_json(r), "");
      return r.status == SolveStatus::Solved && (!r.verification || r.verification->passed()) ? 0 : 1;
    }
    if (*simulate) {
      const Bindings b = evaluate_definitions(parse_spec(read_file(spec_path)));
      const auto fns = pick_functions(b, split_names(use));
      if (fns.empty()) throw std::invalid_argument("empty family");
      if (sim_kind == "gram") {
        const auto [j1, k1] = parse_pair(at, ",");
        const auto [j2, k2] = parse_pair(with, ",");
        if (k1 < 0 || k2 < 0) throw std::invalid_argument("translation index must be nonnegative");
        const auto g = gram_entry(fns, {static_cast<int>(j1), static_cast<std::uint64_t>(k1)},
                                  {static_cast<int>(j2), static_cast<std::uint64_t>(k2)});
        Json j;
        j["value"] = to_string(g);
        emit(j, "");
        return 0;
      }
      std::vector<SpectrumTuple> family;
      if (super) {
        family.push_back(fns);
      } else {
        for (const auto& f : fns) family.push_back({f});
      }
      const auto [r, s] = parse_pair(window, ",");
      const auto rep = simulate_parseval(family, FiniteModel{static_cast<int>(r), static_cast<int>(s)}, trials, seed);
      Json j = to_json(rep);
      j["seed"] = seed;
      emit(j, "");
      return rep.passed() ? 0 : 1;
    }
  } catch (const SpecError& e) {
    std::cerr << spec_path << ":" << e.loc().line << ":" << e.loc().column << ": " << to_string(e.kind()) << ": "
              << e.message() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
