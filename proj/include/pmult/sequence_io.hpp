#pragma once

#include <iosfwd>
#include <string>

#include "pmult/core_sequence.hpp"

namespace pmult {

// CSV: header `n,value`, one row per n in 1..N, value in {-1,1}.
void write_csv(const SignSequence& seq, std::ostream& out);
SignSequence read_csv(std::istream& in, const PrimeSet& primes);

// Binary: 8-byte little-endian N, then one bit per index (bit set means +1),
// least significant bit first, padded to a whole byte.
void write_binary(const SignSequence& seq, std::ostream& out);
SignSequence read_binary(std::istream& in, const PrimeSet& primes);

enum class SequenceFormat { Csv, Binary };

SequenceFormat format_from_path(const std::string& path);
void save_sequence(const SignSequence& seq, const std::string& path, SequenceFormat format);
SignSequence load_sequence(const std::string& path, const PrimeSet& primes, SequenceFormat format);

}  // namespace pmult
