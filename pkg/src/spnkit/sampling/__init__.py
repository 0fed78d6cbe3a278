from .sampler import RandomSource, leaf_sample, random_source, sample

__all__ = ['RandomSource', 'random_source', 'leaf_sample', 'sample']
