// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// modulation.hpp
//
// Sub-band modulation spectra from frequency-domain linear prediction.
//
// A T-second segment is taken to its one-sided inverse Fourier coefficients
// (the spectrum of the analytic signal), weighted per cochlear band, and
// modelled by complex linear prediction. The model's complex cepstrum gives
// the Fourier series of the band's log power envelope over the segment, one
// coefficient per 1/T Hz.
//
// Reported modulation coefficients are those of the Hanning-windowed,
// mean-removed log envelope. The window is applied exactly in the cepstral
// domain as the three-tap kernel (-1/4, 1/2, -1/4); its coherent gain of 1/2
// cancels the factor 2 of the power (squared) envelope, so an AM tone of
// depth d reads ~d at its modulation frequency, and the main lobe spans three
// bins (half the nominal resolution).

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "fdlp/dsp.hpp"
#include "fdlp/lpc.hpp"

namespace fdlp {

struct ModulationSpectrum {
  std::size_t band_index = 0;
  double resolution_hz = 0.0;
  double effective_resolution_hz = 0.0;
  // coeffs[0] = 2 ln(gain) (real log level); coeffs[n >= 1] windowed
  // modulation coefficient at n * resolution_hz.
  std::vector<Complex> coeffs;
  // Raw model cepstrum c[0..N-1], unwindowed.
  std::vector<Complex> cepstrum;
  // Set when the band had no usable energy; coeffs and cepstrum are zero.
  bool degenerate = false;

  std::vector<double> magnitudes() const;
  double frequency_hz(std::size_t n) const { return resolution_hz * static_cast<double>(n); }
};

// conj(DFT(segment)) for bins 0..N/2: the inverse-transform coefficients.
std::vector<Complex> inverse_fourier_coefficients(std::span<const double> segment);

// Windowed modulation coefficients 1..n_out-1 from a raw cepstrum of at least
// n_out + 1 terms; element 0 passes c[0] through.
std::vector<Complex> hann_taper_modulations(std::span<const Complex> cepstrum, std::size_t n_out);

// All-pole model of one band. Throws DegenerateBand / NumericalDegeneracy.
AllPoleModel band_model(std::span<const Complex> freq_coeffs, const CochlearFilterbank& fb,
                        std::size_t band, std::size_t order);

// Per-band spectra of one segment given its inverse Fourier coefficients.
std::vector<ModulationSpectrum> modulation_spectrum_from_coeffs(
    std::span<const Complex> freq_coeffs, const CochlearFilterbank& fb,
    const AnalysisConfig& cfg);

// Per-band spectra of one time-domain segment of window_len_s seconds.
std::vector<ModulationSpectrum> modulation_spectrum(std::span<const double> segment,
                                                    const CochlearFilterbank& fb,
                                                    const AnalysisConfig& cfg);

// Multiplies bin n by n * resolution_hz (bin 0 becomes 0); phase unchanged.
ModulationSpectrum one_over_f_compensate(const ModulationSpectrum& ms);

// (1 + depth cos(2 pi mod_hz t)) cos(2 pi carrier_hz t).
AudioBuffer am_test_signal(double carrier_hz, double mod_hz, double depth, double duration_s,
                           int sample_rate);

// Filterbank matching the one-sided spectrum of a cfg-length segment.
CochlearFilterbank filterbank_for(const AnalysisConfig& cfg, int sample_rate,
                                  const FilterbankOptions& options = {});

}  // namespace fdlp
