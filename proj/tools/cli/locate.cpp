#include "locate.hpp"

namespace ergotor::cli {

namespace {

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  void value(const std::string& pointer) {
    skip_space();
    if (pos_ >= text_.size()) return;
    lines_.emplace(pointer, line_);
    switch (text_[pos_]) {
      case '{': object(pointer); break;
      case '[': array(pointer); break;
      case '"': string(); break;
      default:
        while (pos_ < text_.size() && !is_delimiter(text_[pos_])) ++pos_;
    }
  }

  std::map<std::string, std::size_t> take() { return std::move(lines_); }

 private:
  static bool is_delimiter(char c) {
    return c == ',' || c == ']' || c == '}' || c == ' ' || c == '\t' ||
           c == '\r' || c == '\n';
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') ++line_;
      else if (c != ' ' && c != '\t' && c != '\r') break;
      ++pos_;
    }
  }

  // Returns the raw key; escapes other than \" and \\ are kept verbatim.
  std::string string() {
    std::string out;
    ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
        const char next = text_[pos_ + 1];
        if (next == '"' || next == '\\' || next == '/') {
          out += next;
        } else {
          out += '\\';
          out += next;
        }
        pos_ += 2;
        continue;
      }
      out += text_[pos_++];
    }
    ++pos_;
    return out;
  }

  void object(const std::string& pointer) {
    ++pos_;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) return;
      if (text_[pos_] == '}') { ++pos_; return; }
      if (text_[pos_] == ',') { ++pos_; continue; }
      const std::string key = string();
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ':') ++pos_;
      value(pointer + "/" + escape_pointer_token(key));
    }
  }

  void array(const std::string& pointer) {
    ++pos_;
    std::size_t index = 0;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) return;
      if (text_[pos_] == ']') { ++pos_; return; }
      if (text_[pos_] == ',') { ++pos_; continue; }
      value(pointer + "/" + std::to_string(index++));
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::map<std::string, std::size_t> lines_;
};

}  // namespace

std::map<std::string, std::size_t> value_lines(std::string_view text) {
  Scanner scanner(text);
  scanner.value("");
  return scanner.take();
}

std::size_t line_of(const std::map<std::string, std::size_t>& lines,
                    std::string pointer) {
  for (;;) {
    if (auto it = lines.find(pointer); it != lines.end()) return it->second;
    if (pointer.empty()) return 1;
    pointer.erase(pointer.rfind('/'));
  }
}

std::string escape_pointer_token(std::string_view token) {
  std::string out;
  for (char c : token) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

}  // namespace ergotor::cli
