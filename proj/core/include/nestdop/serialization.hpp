#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "nestdop/array_design.hpp"
#include "nestdop/coarray.hpp"
#include "nestdop/estimators.hpp"
#include "nestdop/signal_model.hpp"
#include "nestdop/spectrogram.hpp"

namespace nestdop {

/// Shortest round-trip decimal form of a double ("%.17g").
std::string format_double(double value);

/// {"P": int, "family": string, "slots": [int], "params": {...}}
std::string pattern_to_json(const EmissionPattern& pattern);
EmissionPattern pattern_from_json(std::string_view text);

/// Binary snapshot container, little-endian:
///   char[4] "NSTS", u32 version (1), u32 family (PatternFamily order), u32 P, u32 N, u64 Q, f64 noise power,
///   i32 slots[N], then Q*N complex samples row-major as (re, im) f64 pairs.
void write_snapshots_binary(const SlowTimeSnapshots& snapshots, std::ostream& out);
SlowTimeSnapshots read_snapshots_binary(std::istream& in);

/// Columns: snapshot, slot, re, im.
void write_snapshots_csv(const SlowTimeSnapshots& snapshots, std::ostream& out);

/// Columns: lag, re, im.
void write_coarray_csv(const CoarraySignal& z, std::ostream& out);
std::string coarray_to_json(const CoarraySignal& z);
CoarraySignal coarray_from_json(std::string_view text);

/// Columns: bin, frequency, power.
void write_spectrum_csv(const GridSpectrum& spectrum, std::ostream& out);
std::string spectrum_to_json(const GridSpectrum& spectrum);

/// Columns: frequency, power.
void write_lines_csv(const LineSpectrum& lines, std::ostream& out);
std::string lines_to_json(const LineSpectrum& lines);

/// Long format. Columns: frame, timestamp, bin, frequency, power.
void write_spectrogram_csv(const Spectrogram& spectrogram, std::ostream& out);

/// Binary portable graymap (P5, maxval 255).
void write_pgm(const GrayImage& image, std::ostream& out);

/// {"cpis_per_frame": int, "frames": [[{"frequency":..,"power":..}, ...], ...],
///  "clutter": [{"frequency":..,"relative_db":..}, ...]}
std::string profile_to_json(const PulsatileProfile& profile);
PulsatileProfile profile_from_json(std::string_view text);

}  // namespace nestdop
