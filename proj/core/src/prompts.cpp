#include "hypgame/prompts.hpp"

#include <fstream>
#include <sstream>

#include "hypgame/error.hpp"
#include "hypgame/text.hpp"

namespace hypgame {
namespace detail {
const std::map<std::string, std::string>& builtin_prompt_sources();
}

std::string render_template(std::string_view text, const PromptVars& vars) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto open = text.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    auto close = text.find("}}", open + 2);
    if (close == std::string_view::npos) {
      throw Error(ErrorCode::invalid_input, "unterminated placeholder in prompt template");
    }
    out.append(text.substr(pos, open - pos));
    const std::string key = trim(text.substr(open + 2, close - open - 2));
    auto it = vars.find(key);
    if (it == vars.end()) {
      throw Error(ErrorCode::invalid_input, "prompt placeholder '" + key + "' has no value");
    }
    out.append(it->second);
    pos = close + 2;
  }
  return out;
}

PromptTemplate parse_prompt_file(std::string name, std::string_view contents) {
  PromptTemplate tmpl;
  tmpl.name = std::move(name);
  std::string* current = nullptr;
  std::istringstream in{std::string(contents)};
  std::string line;
  bool saw_section = false;
  while (std::getline(in, line)) {
    const std::string header = trim(line);
    if (header == "### system") {
      current = &tmpl.role;
      saw_section = true;
      continue;
    }
    if (header == "### user") {
      current = &tmpl.user;
      saw_section = true;
      continue;
    }
    if (!current) {
      if (!header.empty()) {
        throw Error(ErrorCode::invalid_input,
                    "prompt '" + tmpl.name + "' has text before its first section header");
      }
      continue;
    }
    current->append(line);
    current->push_back('\n');
  }
  if (!saw_section) throw Error(ErrorCode::invalid_input, "prompt '" + tmpl.name + "' has no sections");
  tmpl.role = trim(tmpl.role);
  tmpl.user = trim(tmpl.user);
  return tmpl;
}

PromptLibrary PromptLibrary::builtin() {
  PromptLibrary lib;
  for (const auto& [name, body] : detail::builtin_prompt_sources()) {
    lib.set(parse_prompt_file(name, body));
  }
  return lib;
}

PromptLibrary PromptLibrary::load_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::io, "prompts directory not found: " + dir.string());
  }
  PromptLibrary lib = builtin();
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
    std::ifstream in(entry.path());
    std::stringstream buffer;
    buffer << in.rdbuf();
    lib.set(parse_prompt_file(entry.path().stem().string(), buffer.str()));
  }
  return lib;
}

bool PromptLibrary::contains(std::string_view name) const {
  return templates_.find(name) != templates_.end();
}

const PromptTemplate& PromptLibrary::get(std::string_view name) const {
  auto it = templates_.find(name);
  if (it == templates_.end()) {
    throw Error(ErrorCode::invalid_input, "no prompt template named '" + std::string(name) + "'");
  }
  return it->second;
}

RenderedPrompt PromptLibrary::render(std::string_view name, const PromptVars& vars) const {
  const auto& tmpl = get(name);
  return {render_template(tmpl.role, vars), render_template(tmpl.user, vars)};
}

std::vector<std::string> PromptLibrary::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : templates_) out.push_back(name);
  return out;
}

void PromptLibrary::set(PromptTemplate tmpl) {
  auto name = tmpl.name;
  templates_.insert_or_assign(std::move(name), std::move(tmpl));
}

}  // namespace hypgame
