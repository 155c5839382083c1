#include "unshred/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace unshred {

namespace {

class LineReader {
 public:
  LineReader(const std::string& path) : path_(path), in_(path) {
    if (!in_) throw io_error("cannot open " + path + " for reading");
  }

  // Returns false at end of file.
  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    return true;
  }

  std::string require(const char* what) {
    std::string line;
    if (!next(line)) fail(std::string("unexpected end of file, expected ") + what);
    return line;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << path_ << ":" << line_no_ << ": " << msg;
    throw io_error(os.str());
  }

  void check_done() {
    std::string line;
    if (next(line)) fail("unexpected trailing content");
  }

 private:
  std::string path_;
  std::ifstream in_;
  size_t line_no_ = 0;
};

uint32_t parse_header(LineReader& r) {
  const std::string line = r.require("matrix size n");
  uint32_t n = 0;
  const char* begin = line.data();
  const char* end = begin + line.size();
  auto [ptr, ec] = std::from_chars(begin, end, n);
  if (ec != std::errc() || ptr != end || n == 0)
    r.fail("malformed header, expected a positive integer n");
  return n;
}

BitVec parse_line(LineReader& r, uint32_t n) {
  const std::string line = r.require("a line of n bits");
  if (line.size() != n) r.fail("line length does not match n");
  BitVec v(n);
  for (uint32_t j = 0; j < n; ++j) {
    if (line[j] == '1')
      v.set(j);
    else if (line[j] != '0')
      r.fail("line contains a character other than 0 and 1");
  }
  return v;
}

std::vector<BitVec> parse_lines(LineReader& r, uint32_t n) {
  std::vector<BitVec> lines;
  lines.reserve(n);
  for (uint32_t i = 0; i < n; ++i) lines.push_back(parse_line(r, n));
  return lines;
}

void expect_keyword(LineReader& r, const char* kw) {
  const std::string line = r.require(kw);
  if (line != kw) r.fail(std::string("expected ") + kw);
}

}  // namespace

BitMatrix read_matrix(const std::string& path) {
  LineReader r(path);
  const uint32_t n = parse_header(r);
  std::vector<BitVec> rows = parse_lines(r, n);
  r.check_done();
  return BitMatrix(std::move(rows));
}

void write_matrix(const std::string& path, const BitMatrix& m) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open " + path + " for writing");
  out << m.n() << "\n";
  for (uint32_t i = 0; i < m.n(); ++i) out << m.row(i).to_string() << "\n";
  if (!out) throw io_error("failed while writing " + path);
}

ShreddedInstance read_instance(const std::string& path) {
  LineReader r(path);
  const uint32_t n = parse_header(r);
  expect_keyword(r, "ROWS");
  std::vector<BitVec> rows = parse_lines(r, n);
  expect_keyword(r, "COLS");
  std::vector<BitVec> cols = parse_lines(r, n);
  r.check_done();
  try {
    return ShreddedInstance(n, std::move(rows), std::move(cols));
  } catch (const std::invalid_argument& e) {
    throw io_error(path + ": " + e.what());
  }
}

void write_instance(const std::string& path, const ShreddedInstance& inst) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open " + path + " for writing");
  out << inst.n() << "\n";
  out << "ROWS\n";
  for (const BitVec& v : inst.rows()) out << v.to_string() << "\n";
  out << "COLS\n";
  for (const BitVec& v : inst.cols()) out << v.to_string() << "\n";
  if (!out) throw io_error("failed while writing " + path);
}

}  // namespace unshred
