#include "pmult/sequence_io.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace pmult {

void write_csv(const SignSequence& seq, std::ostream& out) {
  std::string buf = "n,value\n";
  buf.reserve(16 * seq.horizon() + 8);
  for (u64 n = 1; n <= seq.horizon(); ++n) {
    if (!seq.is_set(n)) throw UnsetValue("write_csv: gap at " + std::to_string(n));
    buf += std::to_string(n);
    buf += seq.at(n) > 0 ? ",1\n" : ",-1\n";
  }
  out << buf;
}

SignSequence read_csv(std::istream& in, const PrimeSet& primes) {
  std::string line;
  if (!std::getline(in, line)) throw UsageError("empty sequence file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "n,value") throw UsageError("expected CSV header 'n,value'");
  std::vector<Sign> values;
  u64 expected = 1;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw UsageError("malformed CSV row: " + line);
    u64 n;
    int v;
    try {
      n = std::stoull(line.substr(0, comma));
      v = std::stoi(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw UsageError("malformed CSV row: " + line);
    }
    if (n != expected) throw UsageError("CSV rows must run 1..N in order; got " + std::to_string(n));
    if (v != 1 && v != -1) throw UsageError("CSV value must be 1 or -1 at n=" + std::to_string(n));
    values.push_back(static_cast<Sign>(v));
    ++expected;
  }
  if (values.empty()) throw UsageError("sequence file has no rows");
  SignSequence seq(primes, values.size());
  auto dst = seq.mutable_values();
  std::copy(values.begin(), values.end(), dst.begin() + 1);
  return seq;
}

void write_binary(const SignSequence& seq, std::ostream& out) {
  const u64 n_total = seq.horizon();
  std::array<char, 8> header{};
  for (int i = 0; i < 8; ++i) header[i] = static_cast<char>((n_total >> (8 * i)) & 0xff);
  out.write(header.data(), 8);
  std::vector<unsigned char> bits((n_total + 7) / 8, 0);
  for (u64 n = 1; n <= n_total; ++n) {
    if (!seq.is_set(n)) throw UnsetValue("write_binary: gap at " + std::to_string(n));
    if (seq.at(n) > 0) bits[(n - 1) / 8] |= static_cast<unsigned char>(1u << ((n - 1) % 8));
  }
  out.write(reinterpret_cast<const char*>(bits.data()), static_cast<std::streamsize>(bits.size()));
}

SignSequence read_binary(std::istream& in, const PrimeSet& primes) {
  std::array<unsigned char, 8> header{};
  if (!in.read(reinterpret_cast<char*>(header.data()), 8)) throw UsageError("truncated binary header");
  u64 n_total = 0;
  for (int i = 0; i < 8; ++i) n_total |= static_cast<u64>(header[i]) << (8 * i);
  if (n_total == 0) throw UsageError("binary sequence has N = 0");
  std::vector<unsigned char> bits((n_total + 7) / 8);
  if (!in.read(reinterpret_cast<char*>(bits.data()), static_cast<std::streamsize>(bits.size())))
    throw UsageError("truncated binary payload");
  SignSequence seq(primes, n_total);
  auto dst = seq.mutable_values();
  for (u64 n = 1; n <= n_total; ++n)
    dst[n] = (bits[(n - 1) / 8] >> ((n - 1) % 8)) & 1u ? Sign{1} : Sign{-1};
  return seq;
}

SequenceFormat format_from_path(const std::string& path) {
  auto ends_with = [&](const std::string& suffix) {
    return path.size() >= suffix.size() && path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  return ends_with(".bin") ? SequenceFormat::Binary : SequenceFormat::Csv;
}

void save_sequence(const SignSequence& seq, const std::string& path, SequenceFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open " + path + " for writing");
  if (format == SequenceFormat::Binary)
    write_binary(seq, out);
  else
    write_csv(seq, out);
}

SignSequence load_sequence(const std::string& path, const PrimeSet& primes, SequenceFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  return format == SequenceFormat::Binary ? read_binary(in, primes) : read_csv(in, primes);
}

}  // namespace pmult
