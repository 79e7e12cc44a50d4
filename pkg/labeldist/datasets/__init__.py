from labeldist.datasets.dataset import Dataset
from labeldist.datasets.loaders import (
    load_components,
    load_content_cites,
    load_edge_label_tsv,
    load_edge_list,
    write_components,
    write_edge_label_tsv,
)
from labeldist.datasets.splits import SplitSpec, component_split, load_split, planetoid_split, ratio_split, save_split
from labeldist.datasets.synthetic import make_network_synthetic, make_multilabel_synthetic
