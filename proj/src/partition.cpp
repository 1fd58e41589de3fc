#include "sqcrn/partition.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "sqcrn/parser.hpp"

namespace sqcrn {

std::string Interval::text() const {
  std::ostringstream os;
  if (singleton())
    os << lo;
  else if (hi)
    os << lo << ".." << *hi;
  else
    os << lo << "..";
  return os.str();
}

std::size_t LevelPartition::level_of(std::size_t species_idx, Count n) const {
  const auto& intervals = levels[species_idx];
  for (std::size_t i = 0; i < intervals.size(); ++i)
    if (intervals[i].contains(n))
      return i;
  throw std::logic_error("partition does not cover population " + std::to_string(n));
}

std::vector<PartitionViolation> validate_partition(const Crn& crn,
                                                   const LevelPartition& partition) {
  std::vector<PartitionViolation> violations;
  auto violation = [&](std::size_t sp, std::string msg) {
    violations.push_back({sp, std::move(msg)});
  };

  if (partition.levels.size() != crn.species.size() ||
      partition.bounds.size() != crn.species.size()) {
    violation(0, "partition does not cover every species");
    return violations;
  }

  for (std::size_t sp = 0; sp < crn.species.size(); ++sp) {
    const std::string& name = crn.species[sp].name;
    const auto& intervals = partition.levels[sp];
    if (intervals.empty()) {
      violation(sp, name + ": no intervals");
      continue;
    }
    if (intervals.front().lo != 0)
      violation(sp, name + ": first interval must start at 0");
    for (std::size_t i = 0; i + 1 < intervals.size(); ++i) {
      if (!intervals[i].hi) {
        violation(sp, name + ": only the last interval may be unbounded");
        break;
      }
      if (intervals[i + 1].lo != *intervals[i].hi + 1)
        violation(sp, name + ": gap or overlap between " + intervals[i].text() +
                          " and " + intervals[i + 1].text());
    }
    if (intervals.back().hi)
      violation(sp, name + ": last interval must be unbounded");

    Count max_r = crn.max_reactant_coefficient(sp);
    for (Count i = 0; i < max_r; ++i) {
      bool found = false;
      for (const Interval& interval : intervals)
        if (interval.singleton() && interval.lo == i)
          found = true;
      if (!found)
        violation(sp, name + ": missing singleton {" + std::to_string(i) + "}");
    }

    if (partition.bounds[sp] < intervals.back().lo)
      violation(sp, name + ": bound " + std::to_string(partition.bounds[sp]) +
                        " below top interval start " +
                        std::to_string(intervals.back().lo));
  }
  return violations;
}

AbstractState abstract_state(const State& state, const LevelPartition& partition) {
  AbstractState astate(state.size());
  for (std::size_t sp = 0; sp < state.size(); ++sp)
    astate[sp] = static_cast<std::uint32_t>(partition.level_of(sp, state[sp]));
  return astate;
}

State concretise(const AbstractState& astate, const LevelPartition& partition) {
  State state(astate.size());
  for (std::size_t sp = 0; sp < astate.size(); ++sp) {
    const Interval& interval = partition.levels[sp][astate[sp]];
    Count hi = interval.hi ? *interval.hi : partition.bounds[sp];
    state[sp] = (interval.lo + hi) / 2;
  }
  return state;
}

std::vector<Interval> default_levels(const Crn& crn, std::size_t species_idx) {
  Count k = std::max<Count>(2, crn.max_reactant_coefficient(species_idx));
  std::vector<Interval> intervals;
  for (Count i = 0; i < k; ++i)
    intervals.push_back({i, i});
  intervals.push_back({k, std::nullopt});
  return intervals;
}

Count default_bound(const Crn& crn, std::size_t species_idx, Count top_lo) {
  return std::max<Count>({10, 2 * crn.initial_state[species_idx], top_lo});
}

LevelPartition default_partition(const Crn& crn) {
  LevelPartition partition;
  partition.levels.resize(crn.species.size());
  partition.bounds.resize(crn.species.size());
  for (std::size_t sp = 0; sp < crn.species.size(); ++sp) {
    partition.levels[sp] = default_levels(crn, sp);
    partition.bounds[sp] = default_bound(crn, sp, partition.levels[sp].back().lo);
  }
  return partition;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos)
    return {};
  std::size_t end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(trim(current));
  return parts;
}

Count parse_count(int line, const std::string& text) {
  try {
    std::size_t used = 0;
    Count value = std::stoll(text, &used);
    if (used != text.size() || value < 0)
      throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ParseError(line, "malformed number '" + text + "'");
  }
}

// One interval token: `5`, `1..5`, or `21..`.
Interval parse_interval(int line, const std::string& text) {
  std::size_t dots = text.find("..");
  if (dots == std::string::npos) {
    Count value = parse_count(line, text);
    return {value, value};
  }
  Interval interval;
  interval.lo = parse_count(line, trim(text.substr(0, dots)));
  std::string hi = trim(text.substr(dots + 2));
  if (!hi.empty())
    interval.hi = parse_count(line, hi);
  return interval;
}

}  // namespace

Config parse_config(std::string_view text, const Crn& crn) {
  Config config;
  config.partition.levels.assign(crn.species.size(), {});
  config.partition.bounds.assign(crn.species.size(), -1);
  std::vector<bool> levels_given(crn.species.size(), false);
  std::vector<bool> bound_given(crn.species.size(), false);

  std::istringstream input{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(input, raw)) {
    ++line_no;
    std::string line = raw;
    if (std::size_t hash = line.find('#'); hash != std::string::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;

    std::istringstream ls(line);
    std::string keyword;
    ls >> keyword;

    if (keyword == "levels") {
      std::size_t colon = line.find(':');
      if (colon == std::string::npos)
        throw ParseError(line_no, "levels directive needs '<species>:'");
      std::string name = trim(line.substr(keyword.size(), colon - keyword.size()));
      const Species* sp = crn.find_species(name);
      if (!sp)
        throw ParseError(line_no, "undeclared species '" + name + "'");
      std::vector<Interval> intervals;
      for (const std::string& token : split(line.substr(colon + 1), '|'))
        intervals.push_back(parse_interval(line_no, token));
      config.partition.levels[sp->index] = std::move(intervals);
      levels_given[sp->index] = true;
    } else if (keyword == "bound") {
      std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw ParseError(line_no, "bound directive needs '='");
      std::string name = trim(line.substr(keyword.size(), eq - keyword.size()));
      const Species* sp = crn.find_species(name);
      if (!sp)
        throw ParseError(line_no, "undeclared species '" + name + "'");
      config.partition.bounds[sp->index] = parse_count(line_no, trim(line.substr(eq + 1)));
      bound_given[sp->index] = true;
    } else if (keyword == "prune") {
      std::string value;
      ls >> value;
      config.prune_level = static_cast<unsigned>(parse_count(line_no, value));
    } else if (keyword == "aggregate") {
      std::size_t colon = line.find(':');
      if (colon == std::string::npos)
        throw ParseError(line_no, "aggregate directive needs '<name>:'");
      std::string name = trim(line.substr(keyword.size(), colon - keyword.size()));
      std::vector<std::size_t> members;
      for (const std::string& token : split(line.substr(colon + 1), ',')) {
        const Species* sp = crn.find_species(token);
        if (!sp)
          throw ParseError(line_no, "undeclared species '" + token + "'");
        members.push_back(sp->index);
      }
      config.aggregates[name] = std::move(members);
    } else if (keyword == "out") {
      std::string path;
      ls >> path;
      if (path.empty())
        throw ParseError(line_no, "out directive needs a path");
      config.out_dir = path;
    } else if (keyword == "caps") {
      std::string rest = trim(line.substr(keyword.size()));
      std::vector<Count> caps(crn.species.size(), -1);
      for (const std::string& assignment : split(rest, ',')) {
        std::size_t eq = assignment.find('=');
        if (eq == std::string::npos)
          throw ParseError(line_no, "malformed caps assignment '" + assignment + "'");
        std::string name = trim(assignment.substr(0, eq));
        const Species* sp = crn.find_species(name);
        if (!sp)
          throw ParseError(line_no, "undeclared species '" + name + "'");
        caps[sp->index] = parse_count(line_no, trim(assignment.substr(eq + 1)));
      }
      config.caps = std::move(caps);
    } else {
      throw ParseError(line_no, "unknown directive '" + keyword + "'");
    }
  }

  for (std::size_t sp = 0; sp < crn.species.size(); ++sp) {
    if (!levels_given[sp])
      config.partition.levels[sp] = default_levels(crn, sp);
    if (!bound_given[sp])
      config.partition.bounds[sp] =
          default_bound(crn, sp, config.partition.levels[sp].back().lo);
  }
  return config;
}

}  // namespace sqcrn
