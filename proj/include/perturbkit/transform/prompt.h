#pragma once

#include <optional>
#include <string>
#include <utility>

#include "perturbkit/core/catalog.h"
#include "perturbkit/core/sample.h"
#include "perturbkit/transform/transport.h"

namespace pk {

struct PromptBundle {
  std::string role;
  struct Task {
    std::string prerequisites;
    std::string requirements;
    std::string format_template;
    std::optional<std::string> example;
  } task;
  struct Code {
    std::string full_source;
    std::string entry_point;
  } code;
  std::string answer_instructions;
};

PromptBundle synthesize_prompt(const CodeSample& sample,
                               const PerturbationMethod& method);

// System message carries the role; the user message the rest.
ChatRequest render_request(const PromptBundle& bundle, const std::string& model,
                           double temperature);

struct LlmAnswer {
  std::string code;
  std::string entry_point;
};

// Extracts {"code", "entry_point"} from a reply that may contain prose or
// code fences. Throws Error(kMalformedAnswer) with the raw text attached.
LlmAnswer parse_llm_answer(const std::string& raw);

}  // namespace pk
