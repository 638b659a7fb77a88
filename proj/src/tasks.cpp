#include "rflow/tasks.hpp"

#include "rflow/datagen.hpp"

namespace rflow {

namespace {

constexpr std::uint64_t kReferenceStreamTag = 0x0DA7A;

}  // namespace

TaskData make_toy_data(const ToyTrainSetup& setup) {
    TaskData task;
    task.input_dim = 2;

    const SourceSpec src = setup.source;
    task.data.draw_source = [src](Rng& rng) {
        return sample_gaussian(1, src.mean_x, src.mean_y, src.stddev, rng);
    };
    const RingSpec ring = setup.ring;
    task.data.draw_target = [ring](Rng& rng) { return sample_ring(1, ring, rng); };

    Rng ref_rng(setup.train.seed, kReferenceStreamTag);
    const Field pool = heterogeneous_references(setup.references.count, ring, src.stddev,
                                                setup.references.quality_levels, ref_rng);
    task.data.references.reserve(pool.rows);
    for (std::size_t i = 0; i < pool.rows; ++i) {
        Field p = Field::points(1);
        p.at(0, 0) = pool.at(i, 0);
        p.at(0, 1) = pool.at(i, 1);
        task.data.references.push_back(std::move(p));
    }
    return task;
}

TaskData make_image_data(const ImageTrainSetup& setup) {
    TaskData task;
    const Field phantom = generate_phantom(setup.phantom);
    task.input_dim = phantom.size();

    task.data.references.reserve(setup.references.count);
    for (std::size_t i = 0; i < setup.references.count; ++i) {
        const double level =
            setup.references.quality_levels[i % setup.references.quality_levels.size()];
        Rng rng(setup.train.seed, mix64(kReferenceStreamTag, i));
        task.data.references.push_back(degrade(phantom, level, setup.train.degradation, rng));
    }
    return task;
}

TrainResult run_toy_training(const ToyTrainSetup& setup) {
    const TaskData task = make_toy_data(setup);
    const ModelArch arch = model_arch_from_json(setup.model, task.input_dim);
    return train(setup.train, arch, task.data);
}

TrainResult run_image_training(const ImageTrainSetup& setup) {
    const TaskData task = make_image_data(setup);
    const ModelArch arch = model_arch_from_json(setup.model, task.input_dim);
    return train(setup.train, arch, task.data);
}

}  // namespace rflow
