#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sqcrn/analysis.hpp"
#include "sqcrn/dot.hpp"
#include "sqcrn/oracle_check.hpp"
#include "sqcrn/parser.hpp"
#include "sqcrn/report_io.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out << content;
}

sqcrn::Config load_config(const std::string& path, const sqcrn::Crn& crn) {
  if (path.empty())
    return sqcrn::parse_config("", crn);
  return sqcrn::parse_config(read_file(path), crn);
}

std::vector<sqcrn::Count> parse_caps(const std::string& text, const sqcrn::Crn& crn) {
  std::vector<sqcrn::Count> caps(crn.species.size(), -1);
  std::istringstream stream(text);
  std::string item;
  std::size_t position = 0;
  while (std::getline(stream, item, ',')) {
    std::size_t eq = item.find('=');
    if (eq != std::string::npos) {
      std::string name = item.substr(0, eq);
      name.erase(0, name.find_first_not_of(" \t"));
      name.erase(name.find_last_not_of(" \t") + 1);
      caps[crn.species_index(name)] = std::stoll(item.substr(eq + 1));
    } else {
      if (position >= caps.size())
        throw std::runtime_error("too many cap entries");
      caps[position++] = std::stoll(item);
    }
  }
  for (std::size_t sp = 0; sp < caps.size(); ++sp)
    if (caps[sp] < 0)
      throw std::runtime_error("no cap given for species " + crn.species[sp].name);
  return caps;
}

int run_analyze(const std::string& model_path, const std::string& config_path,
                int prune_override, const std::string& out_dir,
                const std::string& formats) {
  sqcrn::Crn crn = sqcrn::parse_crn(read_file(model_path));
  sqcrn::Config config = load_config(config_path, crn);
  auto violations = sqcrn::validate_partition(crn, config.partition);
  if (!violations.empty()) {
    for (const auto& v : violations)
      std::cerr << "error: partition: " << v.message << "\n";
    return 1;
  }
  unsigned prune_level =
      prune_override >= 0 ? static_cast<unsigned>(prune_override) : config.prune_level;
  std::string effective_out = out_dir;
  if (effective_out == "." && !config.out_dir.empty())
    effective_out = config.out_dir;

  sqcrn::AbstractCtmc actmc = sqcrn::build_abstraction(crn, config.partition);

  // Display aggregation: merged species render as one summed component in the
  // state labels; the analysis itself is untouched.
  if (!config.aggregates.empty()) {
    for (std::uint32_t s = 0; s < actmc.state_count(); ++s) {
      std::ostringstream label;
      std::vector<bool> hidden(crn.species.size(), false);
      for (const auto& [name, members] : config.aggregates)
        for (std::size_t sp : members)
          hidden[sp] = true;
      bool first = true;
      for (const auto& [name, members] : config.aggregates) {
        sqcrn::Count lo = 0, hi = 0;
        bool unbounded = false;
        for (std::size_t sp : members) {
          const sqcrn::Interval& interval =
              config.partition.levels[sp][actmc.states[s][sp]];
          lo += interval.lo;
          if (interval.hi)
            hi += *interval.hi;
          else
            unbounded = true;
        }
        label << (first ? "" : ", ") << name << ':' << lo << "..";
        if (!unbounded)
          label << hi;
        first = false;
      }
      for (std::size_t sp = 0; sp < crn.species.size(); ++sp) {
        if (hidden[sp])
          continue;
        label << (first ? "" : ", ") << crn.species[sp].name << ':'
              << config.partition.levels[sp][actmc.states[s][sp]].text();
        first = false;
      }
      actmc.labels[s] = label.str();
    }
  }
  for (const auto& dropped : actmc.dropped)
    std::cerr << "note: dropped " << crn.reactions[dropped.reaction].label << " at "
              << actmc.labels[dropped.state] << ": " << dropped.reason << "\n";

  sqcrn::RefinementReport hints = sqcrn::suggest_refinement(crn, actmc, 1);
  for (const auto& h : hints.hints)
    std::cerr << "warning: rate of " << crn.reactions[h.reaction].label << " at "
              << actmc.labels[h.state] << " spans [" << h.lo << ", " << h.hi
              << "], " << h.span << " orders; consider refining\n";
  for (std::size_t sp : hints.reachable_top_species)
    std::cerr << "warning: top interval of " << crn.species[sp].name
              << " is reachable; check its bound\n";

  sqcrn::PrunedGraph pruned = sqcrn::prune(actmc, prune_level);
  sqcrn::AnalysisReport report = sqcrn::analyze(actmc, pruned);

  std::filesystem::path dir(effective_out);
  std::filesystem::create_directories(dir);
  std::istringstream format_stream(formats);
  std::string format;
  while (std::getline(format_stream, format, ',')) {
    if (format == "dot") {
      write_file(dir / "abstraction.dot", sqcrn::export_dot(actmc, &pruned));
      write_file(dir / "pruned.dot", sqcrn::export_dot(actmc, &pruned, &report, true));
    } else if (format == "json") {
      write_file(dir / "report.json", sqcrn::report_to_json(actmc, report));
    } else if (format == "text") {
      write_file(dir / "report.txt", sqcrn::report_to_text(actmc, report));
    } else {
      std::cerr << "error: unknown format '" << format << "'\n";
      return 1;
    }
  }
  std::cout << "states " << actmc.state_count() << ", transitions "
            << actmc.transitions.size() << ", components " << report.components.size()
            << ", outputs in " << dir.string() << "\n";
  return 0;
}

int run_validate(const std::string& model_path, const std::string& config_path,
                 const std::string& caps_text, unsigned seeds) {
  sqcrn::Crn crn = sqcrn::parse_crn(read_file(model_path));
  sqcrn::Config config = load_config(config_path, crn);
  auto violations = sqcrn::validate_partition(crn, config.partition);
  if (!violations.empty()) {
    for (const auto& v : violations)
      std::cerr << "error: partition: " << v.message << "\n";
    return 1;
  }
  sqcrn::ValidationOptions options;
  if (!caps_text.empty())
    options.caps = parse_caps(caps_text, crn);
  else if (config.caps)
    options.caps = *config.caps;
  else
    throw std::runtime_error("validation needs caps (--caps or config)");
  for (std::size_t sp = 0; sp < options.caps.size(); ++sp)
    if (options.caps[sp] < 0)
      throw std::runtime_error("no cap given for species " + crn.species[sp].name);
  options.ssa_runs = seeds;

  auto entries = sqcrn::validate_against_oracle(crn, config.partition, options);
  for (const auto& e : entries) {
    if (e.skipped) {
      std::cout << e.quantity << ": skipped (" << e.note << ")\n";
      continue;
    }
    std::cout << e.quantity << ": abstract 10^" << e.abstract_mag << " ("
              << e.abstract_value << "), oracle 10^" << e.oracle_mag << " ("
              << e.oracle_value << "), |delta| " << e.delta;
    if (!e.note.empty())
      std::cout << " [" << e.note << "]";
    std::cout << "\n";
  }
  return 0;
}

int run_check(const std::string& model_path, const std::string& config_path) {
  sqcrn::Crn crn = sqcrn::parse_crn(read_file(model_path));
  std::cout << "model ok: " << crn.species.size() << " species, "
            << crn.reactions.size() << " reactions\n";
  if (!config_path.empty()) {
    sqcrn::Config config = load_config(config_path, crn);
    auto violations = sqcrn::validate_partition(crn, config.partition);
    if (!violations.empty()) {
      for (const auto& v : violations)
        std::cerr << "error: partition: " << v.message << "\n";
      return 1;
    }
    std::cout << "partition ok\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"order-of-magnitude abstraction and analysis of reaction networks"};
  app.require_subcommand(1);

  std::string model_path, config_path, out_dir = ".", formats = "text,json,dot";
  std::string caps_text;
  int prune_override = -1;
  unsigned seeds = 0;

  CLI::App* analyze = app.add_subcommand("analyze", "abstract, prune and analyze a model");
  analyze->add_option("model", model_path, "model file")->required();
  analyze->add_option("--config", config_path, "partition/config file");
  analyze->add_option("--prune", prune_override, "pruning level n");
  analyze->add_option("--out", out_dir, "output directory");
  analyze->add_option("--format", formats, "comma list of text,json,dot");

  CLI::App* validate = app.add_subcommand("validate", "compare against the exact oracle");
  validate->add_option("model", model_path, "model file")->required();
  validate->add_option("--config", config_path, "partition/config file");
  validate->add_option("--caps", caps_text, "per-species caps, e.g. A=40,B=60");
  validate->add_option("--seeds", seeds, "number of seeded SSA runs");

  CLI::App* check = app.add_subcommand("check", "parse and validate only");
  check->add_option("model", model_path, "model file")->required();
  check->add_option("--config", config_path, "partition/config file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed())
      return run_analyze(model_path, config_path, prune_override, out_dir, formats);
    if (validate->parsed())
      return run_validate(model_path, config_path, caps_text, seeds);
    return run_check(model_path, config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
