from labeldist.graph.csr import Graph, build_graph, edges_of, neighbors
from labeldist.graph.normalize import sym_normalized_adjacency
