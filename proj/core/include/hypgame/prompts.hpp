#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hypgame {

namespace prompt_names {
inline constexpr std::string_view diagnose = "diagnose";
inline constexpr std::string_view move_selection = "move_selection";
inline constexpr std::string_view retrieve_evidence = "retrieve_evidence";
inline constexpr std::string_view speculate_evidence = "speculate_evidence";
inline constexpr std::string_view expand = "expand";
inline constexpr std::string_view prune = "prune";
inline constexpr std::string_view debate_setup = "clash_of_claims_setup";
inline constexpr std::string_view claimsmith = "claimsmith";
inline constexpr std::string_view debate_conclude = "clash_of_claims_conclude";
inline constexpr std::string_view judge_error_removal = "llm_as_judge_error_removal";
inline constexpr std::string_view judge_pathway_recall = "llm_judge_pathway_recall";
inline constexpr std::string_view zero_shot = "zero_shot";
inline constexpr std::string_view chain_of_thought = "chain_of_thought";
inline constexpr std::string_view react = "react";
inline constexpr std::string_view task_reconstruction = "user_prompt_reconstruction";
inline constexpr std::string_view task_corruption = "user_prompt_corruption";
}  // namespace prompt_names

struct PromptTemplate {
  std::string name;
  std::string role;  // "### system" section
  std::string user;  // "### user" section
};

struct RenderedPrompt {
  std::string role;
  std::string user;
};

using PromptVars = std::map<std::string, std::string, std::less<>>;

// Substitutes {{name}} placeholders. Unknown placeholders are an error.
std::string render_template(std::string_view text, const PromptVars& vars);

// Splits a prompt file into its "### system" / "### user" sections.
PromptTemplate parse_prompt_file(std::string name, std::string_view contents);

class PromptLibrary {
 public:
  // Templates compiled in from the repository's prompts/ directory.
  static PromptLibrary builtin();
  // Files named <template>.txt in `dir` override the built-in ones.
  static PromptLibrary load_dir(const std::filesystem::path& dir);

  bool contains(std::string_view name) const;
  const PromptTemplate& get(std::string_view name) const;
  RenderedPrompt render(std::string_view name, const PromptVars& vars) const;
  std::vector<std::string> names() const;

  void set(PromptTemplate tmpl);

 private:
  std::map<std::string, PromptTemplate, std::less<>> templates_;
};

}  // namespace hypgame
