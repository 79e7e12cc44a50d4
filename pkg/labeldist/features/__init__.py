from labeldist.features.distribution import (
    FeatureMatrix,
    adjacency_features,
    build_label_distribution,
    label_conv_features,
    load_features,
    save_sparse_features,
)
from labeldist.features.labels import LabelMatrix, Task, train_label_matrix
