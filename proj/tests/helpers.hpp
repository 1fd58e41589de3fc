#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "sqcrn/abstraction.hpp"
#include "sqcrn/parser.hpp"
#include "sqcrn/partition.hpp"

namespace test_helpers {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline std::string corpus(const std::string& name) {
  return std::string(CORPUS_DIR) + "/" + name;
}

inline sqcrn::Crn load_crn(const std::string& name) {
  return sqcrn::parse_crn(read_file(corpus(name)));
}

inline sqcrn::Config load_config(const std::string& name, const sqcrn::Crn& crn) {
  return sqcrn::parse_config(read_file(corpus(name)), crn);
}

// Hand-built six-state graph: a three-state cycle s1->s2->s3->s1 fed from s0,
// with absorbing self-loop states t and u, a slow return s2->s0, a slow
// parallel edge s3->s1 and a fast edge s3->u.
//
//   s0 -1-> s1, s0 -1-> t, s1 -10-> s2, s2 -10-> s3, s3 -100-> s1,
//   s3 -100-> u, s3 -10-> s1, s2 -1-> s0, t -1-> t, u -1-> u
struct CycleFixture {
  sqcrn::AbstractCtmc model;
  enum : std::uint32_t { s0 = 0, s1 = 1, s2 = 2, s3 = 3, t = 4, u = 5 };
  std::uint32_t e_s0_s1, e_s0_t, e_s1_s2, e_s2_s3, e_s3_s1_fast, e_s3_u,
      e_s3_s1_slow, e_s2_s0, e_t_t, e_u_u;
};

inline CycleFixture cycle_fixture(double scale = 1.0) {
  CycleFixture f;
  sqcrn::AbstractCtmc& m = f.model;
  const char* names[] = {"s0", "s1", "s2", "s3", "t", "u"};
  for (const char* name : names) {
    m.labels.push_back(name);
    m.outgoing.emplace_back();
  }
  m.reaction_labels = {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"};
  m.initial = CycleFixture::s0;
  f.e_s0_s1 = add_transition(m, f.s0, f.s1, 0, 1 * scale);
  f.e_s0_t = add_transition(m, f.s0, f.t, 1, 1 * scale);
  f.e_s1_s2 = add_transition(m, f.s1, f.s2, 2, 10 * scale);
  f.e_s2_s3 = add_transition(m, f.s2, f.s3, 3, 10 * scale);
  f.e_s3_s1_fast = add_transition(m, f.s3, f.s1, 4, 100 * scale);
  f.e_s3_u = add_transition(m, f.s3, f.u, 5, 100 * scale);
  f.e_s3_s1_slow = add_transition(m, f.s3, f.s1, 6, 10 * scale);
  f.e_s2_s0 = add_transition(m, f.s2, f.s0, 7, 1 * scale);
  f.e_t_t = add_transition(m, f.t, f.t, 8, 1 * scale);
  f.e_u_u = add_transition(m, f.u, f.u, 9, 1 * scale);
  return f;
}

}  // namespace test_helpers
