#pragma once

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "foodaug/corpus.hpp"
#include "foodaug/error.hpp"

namespace foodaug {

// Generation prompt with five required placeholders, validated at
// construction. The output contract is the machine-readable reply shape the
// parser below expects.
class PromptTemplate {
 public:
  static const std::vector<std::string>& placeholders() {
    static const std::vector<std::string> names = {
        "n", "hazard_label", "product_label", "seed_title", "seed_text"};
    return names;
  }

  explicit PromptTemplate(std::string text,
                          std::string output_contract =
                              "numbered list of Title/Body pairs")
      : text_(std::move(text)), output_contract_(std::move(output_contract)) {
    for (const auto& name : placeholders()) {
      std::string token = "{" + name + "}";
      size_t first = text_.find(token);
      if (first == std::string::npos)
        throw Error(ErrorKind::validation,
                    "prompt template lacks placeholder " + token);
      if (text_.find(token, first + token.size()) != std::string::npos)
        throw Error(ErrorKind::validation,
                    "prompt template repeats placeholder " + token);
    }
  }

  static PromptTemplate default_template() {
    return PromptTemplate(
        "You are helping expand a dataset of food incident reports.\n"
        "Write {n} new report variants based on the seed report below.\n"
        "Each variant must describe an incident of the same kind, staying\n"
        "consistent with the hazard category \"{hazard_label}\" and the\n"
        "product category \"{product_label}\". Use fresh wording instead of\n"
        "copying seed sentences.\n"
        "\n"
        "Seed title: {seed_title}\n"
        "Seed report: {seed_text}\n"
        "\n"
        "Reply with a numbered list only. For each variant output:\n"
        "<number>. Title: <variant title>\n"
        "Body: <variant body>\n");
  }

  const std::string& text() const { return text_; }
  const std::string& output_contract() const { return output_contract_; }

  // Substitutes every placeholder; a placeholder without a value is an error.
  std::string render(const std::map<std::string, std::string>& values) const {
    for (const auto& name : placeholders())
      if (!values.count(name))
        throw Error(ErrorKind::validation,
                    "no value for prompt placeholder {" + name + "}");
    std::string out = text_;
    for (const auto& [name, value] : values) {
      std::string token = "{" + name + "}";
      size_t pos = out.find(token);
      if (pos != std::string::npos) out.replace(pos, token.size(), value);
    }
    if (trim(out).empty())
      throw Error(ErrorKind::validation, "rendered prompt is empty");
    return out;
  }

 private:
  std::string text_;
  std::string output_contract_;
};

struct Decoding {
  double temperature = 0.7;
  size_t max_output_tokens = 512;
  // Per-request sampling seed, also part of the cache key; gives repeated
  // requests against the same seed sample distinct identities.
  uint64_t sampling_seed = 0;
};

struct GenerationRequest {
  Sample seed;
  size_t count = 1;
  PromptTemplate template_;
  Decoding decoding;
  int attempt = 0;          // retry counter
  size_t request_index = 0; // per-seed request counter

  void validate() const {
    if (count < 1)
      throw Error(ErrorKind::validation, "generation request count must be >= 1");
  }
};

inline std::string render_prompt(const PromptTemplate& tmpl,
                                 const GenerationRequest& request) {
  request.validate();
  return tmpl.render({{"n", std::to_string(request.count)},
                      {"hazard_label", request.seed.hazard_label},
                      {"product_label", request.seed.product_label},
                      {"seed_title", request.seed.title},
                      {"seed_text", request.seed.text}});
}

struct ReplyItem {
  std::string title;
  std::string body;
};

namespace detail {

// Matches "<digits>. Title: ..." or "<digits>) Title: ...".
inline bool parse_item_start(const std::string& line, std::string* title_out) {
  size_t i = 0;
  while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
  size_t digits = i;
  while (digits < line.size() && std::isdigit(static_cast<unsigned char>(line[digits])))
    ++digits;
  if (digits == i) return false;
  if (digits >= line.size() || (line[digits] != '.' && line[digits] != ')'))
    return false;
  size_t rest = digits + 1;
  while (rest < line.size() && std::isspace(static_cast<unsigned char>(line[rest])))
    ++rest;
  static const std::string kTitle = "Title:";
  if (line.compare(rest, kTitle.size(), kTitle) != 0) return false;
  *title_out = trim(line.substr(rest + kTitle.size()));
  return true;
}

}  // namespace detail

// Parses the reply contract: a numbered list of Title/Body pairs. Anything
// outside that shape is a parse error; the raw reply is kept in the error
// message for inspection.
inline std::vector<ReplyItem> parse_generation_reply(const std::string& raw) {
  auto fail = [&](const std::string& why) -> Error {
    return Error(ErrorKind::parse,
                 "malformed generation reply (" + why + "); raw reply:\n" + raw);
  };
  std::vector<ReplyItem> items;
  bool in_body = false;
  std::istringstream in(raw);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string title;
    if (detail::parse_item_start(line, &title)) {
      if (!items.empty() && trim(items.back().body).empty())
        throw fail("item " + std::to_string(items.size()) + " has no body");
      items.push_back({title, ""});
      in_body = false;
      continue;
    }
    std::string t = trim(line);
    if (t.empty()) continue;
    static const std::string kBody = "Body:";
    if (!items.empty() && !in_body && t.compare(0, kBody.size(), kBody) == 0) {
      items.back().body = trim(t.substr(kBody.size()));
      in_body = true;
      continue;
    }
    if (in_body) {  // body continuation line
      if (!items.back().body.empty()) items.back().body += " ";
      items.back().body += t;
      continue;
    }
    throw fail("unexpected line: " + t);
  }
  if (items.empty()) throw fail("no numbered items");
  if (trim(items.back().body).empty())
    throw fail("item " + std::to_string(items.size()) + " has no body");
  return items;
}

}  // namespace foodaug
