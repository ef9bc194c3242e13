#pragma once

#include <filesystem>
#include <string>

#include "kplan/corpus.hpp"
#include "kplan/ground.hpp"
#include "kplan/parser.hpp"

namespace testing_support {

inline std::filesystem::path corpus(const std::string& name) {
  return std::filesystem::path(KPLAN_CORPUS_DIR) / name;
}

inline kplan::GroundDomain ground_text(const std::string& text, const std::string& background = "") {
  return kplan::ground(kplan::parse(text, background));
}

inline kplan::GroundDomain ground_file(const std::string& name, const std::string& background = "") {
  if (background.empty()) return kplan::ground(kplan::load_program(corpus(name)));
  return kplan::ground(kplan::load_program(corpus(name), corpus(background)));
}

inline kplan::CompiledGoal goal_of(const kplan::GroundDomain& g, int length = -1) {
  kplan::CompiledGoal q = *g.goal;
  if (length >= 0) q.length = length;
  return q;
}

}  // namespace testing_support
