#pragma once

// Minibatch steps shared by the conventional, rf-only and multi-discriminator
// trainers. Each step owns exactly one optimizer update.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "botgan/gan.hpp"

namespace botgan::gan::detail {

/// A network with its optimizer state and dropout stream.
template <typename Net>
struct Trainee {
    Net model;
    nn::AdamState adam;
    Rng dropout_rng;
};

using DiscTrainee = Trainee<DiscriminatorNet>;
using GenTrainee = Trainee<GeneratorNet>;

DiscTrainee make_disc_trainee(const GanConfig& config, std::uint64_t seed, std::size_t index);
GenTrainee make_gen_trainee(const GanConfig& config, std::uint64_t seed);

/// Generator forward pass kept for the generator step.
struct GeneratorPass {
    nn::ForwardResult forward;
    nn::Matrix features;     // sigmoid of the first d logits
    nn::Vector label_units;  // sigmoid of the last logit
};

GeneratorPass generator_pass(const GeneratorNet& generator, const nn::Matrix& noise);

nn::Vector rounded_labels(const nn::Vector& label_units);

/// Stacks real rows over fake rows.
nn::Matrix stack_rows(const nn::Matrix& real, const nn::Matrix& fake);

/// rf-head update on [real; fake] with targets 1 / 0. Returns the rf loss.
double disc_rf_step(DiscTrainee& disc, const nn::Matrix& real, const nn::Matrix& fake,
                    double dropout_rate);

struct ConventionalDiscLosses {
    double total = 0.0;
    /// Generator objective evaluated on this step's (pre-update) fake logits.
    double generator_view = 0.0;
};

/// Both-head update: hb(real, y) + hb(fake, round(l)) + rf(real=1, fake=0).
ConventionalDiscLosses disc_conventional_step(DiscTrainee& disc, const nn::Matrix& real,
                                              const nn::Vector& real_labels,
                                              const nn::Matrix& fake,
                                              const nn::Vector& fake_labels,
                                              double dropout_rate);

/// Generator update against the given discriminators: loss is the mean over
/// discriminators of BCE(rf(G(z)), 1), plus BCE(hb(G(z)), round(l)) when
/// `with_label_term`. Returns the loss. With `parallel`, per-discriminator
/// passes run concurrently and are reduced in index order.
double generator_step(GenTrainee& gen, const GeneratorPass& pass,
                      std::span<DiscTrainee* const> discs, double dropout_rate,
                      bool with_label_term, bool parallel = false);

/// Probe noise shared by every epoch of a run.
nn::Matrix probe_noise(const GanConfig& config, std::uint64_t seed);

/// Fills label_ratio and, given a judge, judged_ratio for the probe batch.
void record_probe_ratios(AdversarialEpoch& record, const GeneratorNet& generator,
                         const nn::Matrix& noise, const DiscriminatorNet* judge);
void check_judge(const DiscriminatorNet* judge, const GanConfig& config);

/// Shuffled minibatch index lists over `n` rows.
std::vector<std::vector<std::size_t>> minibatches(std::size_t n, std::size_t batch_size, Rng& rng);

nn::Matrix gather_rows(const nn::Matrix& source, std::span<const std::size_t> rows);
nn::Vector gather(const nn::Vector& source, std::span<const std::size_t> rows);

}  // namespace botgan::gan::detail
