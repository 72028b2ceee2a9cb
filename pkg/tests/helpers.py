from ckdist.chain import random_chain


def random_pair(rng, max_states=4, m=2, sparsity=0.0):
    n1 = int(rng.integers(1, max_states + 1))
    n2 = int(rng.integers(1, max_states + 1))
    return (
        random_chain(rng, n1, m, sparsity=sparsity),
        random_chain(rng, n2, m, sparsity=sparsity),
    )
