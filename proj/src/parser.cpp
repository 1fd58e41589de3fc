#include "sqcrn/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <set>
#include <sstream>

namespace sqcrn {

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

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'))
      return false;
  return true;
}

struct Term {
  Count coefficient;
  std::string species;  // empty for the empty complex
};

// A term is `[<nat> ]<name>`; the empty complex is written `0`.
Term parse_term(int line, const std::string& text) {
  std::string t = trim(text);
  if (t.empty())
    throw ParseError(line, "empty term in complex");
  if (t == "0")
    return {0, ""};
  std::size_t i = 0;
  Count coefficient = 1;
  if (std::isdigit(static_cast<unsigned char>(t[0]))) {
    std::size_t digits = 0;
    coefficient = std::stoll(t, &digits);
    i = digits;
    while (i < t.size() && (t[i] == ' ' || t[i] == '\t'))
      ++i;
    if (coefficient <= 0)
      throw ParseError(line, "term coefficient must be positive in '" + t + "'");
  }
  std::string name = t.substr(i);
  if (!is_identifier(name))
    throw ParseError(line, "malformed term '" + t + "'");
  return {coefficient, name};
}

std::vector<Count> parse_complex(int line, const Crn& crn, const std::string& text) {
  std::vector<Count> coefficients(crn.species.size(), 0);
  for (const std::string& part : split(text, '+')) {
    Term term = parse_term(line, part);
    if (term.species.empty())
      continue;
    const Species* sp = crn.find_species(term.species);
    if (!sp)
      throw ParseError(line, "undeclared species '" + term.species + "'");
    coefficients[sp->index] += term.coefficient;
  }
  return coefficients;
}

}  // namespace

Crn parse_crn(std::string_view text) {
  Crn crn;
  std::set<std::string> reaction_labels;
  bool init_seen = false;

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

    if (keyword == "species") {
      std::string rest = trim(line.substr(keyword.size()));
      for (const std::string& name : split(rest, ',')) {
        if (!is_identifier(name))
          throw ParseError(line_no, "malformed species name '" + name + "'");
        if (crn.find_species(name))
          throw ParseError(line_no, "duplicate species '" + name + "'");
        crn.species.push_back({name, crn.species.size()});
      }
    } else if (keyword == "unit") {
      std::string label;
      ls >> label;
      if (label.empty())
        throw ParseError(line_no, "unit directive needs a label");
      crn.time_unit = label;
    } else if (keyword == "init") {
      std::string rest = trim(line.substr(keyword.size()));
      if (crn.initial_state.size() != crn.species.size())
        crn.initial_state.assign(crn.species.size(), 0);
      for (const std::string& assignment : split(rest, ',')) {
        std::size_t eq = assignment.find('=');
        if (eq == std::string::npos)
          throw ParseError(line_no, "malformed init assignment '" + assignment + "'");
        std::string name = trim(assignment.substr(0, eq));
        std::string value = trim(assignment.substr(eq + 1));
        const Species* sp = crn.find_species(name);
        if (!sp)
          throw ParseError(line_no, "undeclared species '" + name + "'");
        try {
          std::size_t used = 0;
          Count count = std::stoll(value, &used);
          if (used != value.size() || count < 0)
            throw std::invalid_argument(value);
          crn.initial_state[sp->index] = count;
        } catch (const std::exception&) {
          throw ParseError(line_no, "malformed population '" + value + "'");
        }
      }
      init_seen = true;
    } else if (keyword == "r") {
      std::string rest = trim(line.substr(keyword.size()));
      std::size_t colon = rest.find(':');
      if (colon == std::string::npos)
        throw ParseError(line_no, "reaction line needs '<label>:'");
      std::string label = trim(rest.substr(0, colon));
      if (!is_identifier(label))
        throw ParseError(line_no, "malformed reaction label '" + label + "'");
      if (!reaction_labels.insert(label).second)
        throw ParseError(line_no, "duplicate reaction label '" + label + "'");
      std::string body = rest.substr(colon + 1);
      std::size_t at = body.rfind('@');
      if (at == std::string::npos)
        throw ParseError(line_no, "reaction line needs '@ <rate>'");
      std::string rate_text = trim(body.substr(at + 1));
      std::string arrow_part = body.substr(0, at);
      std::size_t arrow = arrow_part.find("->");
      if (arrow == std::string::npos)
        throw ParseError(line_no, "reaction line needs '->'");

      Reaction reaction;
      reaction.label = label;
      reaction.reactants = parse_complex(line_no, crn, trim(arrow_part.substr(0, arrow)));
      reaction.products = parse_complex(line_no, crn, trim(arrow_part.substr(arrow + 2)));
      try {
        std::size_t used = 0;
        reaction.rate_coefficient = std::stod(rate_text, &used);
        if (used != rate_text.size())
          throw std::invalid_argument(rate_text);
      } catch (const std::exception&) {
        throw ParseError(line_no, "malformed rate '" + rate_text + "'");
      }
      if (!(reaction.rate_coefficient > 0.0))
        throw ParseError(line_no, "rate must be positive, got '" + rate_text + "'");
      reaction.change.resize(crn.species.size());
      for (std::size_t i = 0; i < crn.species.size(); ++i)
        reaction.change[i] = reaction.products[i] - reaction.reactants[i];
      crn.reactions.push_back(std::move(reaction));
    } else {
      throw ParseError(line_no, "unknown directive '" + keyword + "'");
    }
  }

  if (crn.species.empty())
    throw ParseError(line_no, "model declares no species");
  if (!init_seen)
    crn.initial_state.assign(crn.species.size(), 0);
  if (crn.initial_state.size() != crn.species.size())
    crn.initial_state.resize(crn.species.size(), 0);
  return crn;
}

}  // namespace sqcrn
