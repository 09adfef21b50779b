// Copyright 2026 The quorumlens Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

// Hand-built reference networks, independent of the JSON files.

#include "quorumlens/quorumlens.hpp"

#include <string>
#include <vector>

namespace fixtures {

using namespace quorumlens;

inline std::vector<std::string> labels(int n) {
  std::vector<std::string> out;
  for (int k = 1; k <= n; ++k) out.push_back(std::to_string(k));
  return out;
}

// Two triangles: 1,2,3 need {1,2,3}; 4,5,6 need {4,5,6}.
inline Btn fig1() {
  SliceDraft d;
  d.nodes = labels(6);
  d.vetoed = true;
  for (const char* a : {"1", "2", "3"}) d.slices[a] = {{"1", "2", "3"}};
  for (const char* a : {"4", "5", "6"}) d.slices[a] = {{"4", "5", "6"}};
  return validate_network(d).take();
}

// Fig-1 with node 3 looking at 5 as well.
inline Btn example2() {
  auto p = fig1().parts();
  p.slices[2] = {make_set(6, {0, 1, 2, 4})};
  p.trust[2] = make_set(6, {0, 1, 2, 4});
  return Btn::create(std::move(p)).take();
}

// Unanimity: every node needs all of N.
inline Btn unanimity(int n, std::vector<std::string> byzantine = {}) {
  SliceDraft d;
  d.nodes = labels(n);
  d.byzantine = std::move(byzantine);
  d.vetoed = true;
  for (const auto& l : d.nodes) d.slices[l] = {d.nodes};
  return validate_network(d).take();
}

// Six nodes trusting {1..5} with quota 0.8; optionally 5 Byzantine.
inline Qbtn example4(bool byzantine_five = false) {
  QuotaDraft d;
  d.nodes = labels(6);
  if (byzantine_five) d.byzantine = {"5"};
  for (const auto& l : d.nodes) {
    d.trust[l] = {"1", "2", "3", "4", "5"};
    d.quota[l] = make_rational(4, 5);
  }
  return validate_network(d).take();
}

// Groups {1,2,3} and {3,4,5} sharing Byzantine node 3; quota 1, b = 1/3.
inline Qbtn example1(Rational b = make_rational(1, 3)) {
  QuotaDraft d;
  d.nodes = labels(5);
  d.byzantine = {"3"};
  for (const char* l : {"1", "2"}) d.trust[l] = {"1", "2", "3"};
  for (const char* l : {"4", "5"}) d.trust[l] = {"3", "4", "5"};
  for (const char* l : {"1", "2", "4", "5"}) {
    d.quota[l] = Rational(1);
    d.byz_fraction[l] = b;
  }
  return validate_network(d).take();
}

// Opinion profile of the lopsided example: 1,2 hold 1; 4,5 hold 0; node 3
// tells 1,2 "1" and 4,5 "0".
inline OpinionProfile example1_profile() {
  OpinionProfile p(5);
  p.hold(0, Opinion::one);
  p.hold(1, Opinion::one);
  p.hold(3, Opinion::zero);
  p.hold(4, Opinion::zero);
  p.reveal(2, 0, Opinion::one);
  p.reveal(2, 1, Opinion::one);
  p.reveal(2, 3, Opinion::zero);
  p.reveal(2, 4, Opinion::zero);
  return p;
}

inline Btn single_vetoed() {
  SliceDraft d;
  d.nodes = {"i"};
  d.vetoed = true;
  d.slices["i"] = {{"i"}};
  return validate_network(d).take();
}

inline Cnf cnf(int vars, std::vector<Clause> clauses) { return Cnf{vars, std::move(clauses)}; }

}  // namespace fixtures
