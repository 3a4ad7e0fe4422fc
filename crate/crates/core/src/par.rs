//! Data-parallel helpers. With the `parallel` feature these run on the rayon
//! global pool (or whatever pool the caller installs); without it they are
//! plain sequential loops. Output order never depends on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `items.iter().map(f).collect()`, in parallel when enabled.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

pub fn map_seq<T, R, F: Fn(&T) -> R>(items: &[T], f: F) -> Vec<R> {
    items.iter().map(f).collect()
}

/// Indices in `0..n` accepted by `keep`, ascending.
pub fn filter_range<F>(n: u64, keep: F) -> Vec<u64>
where
    F: Fn(u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().filter(|&i| keep(i)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).filter(|&i| keep(i)).collect()
    }
}

pub fn filter_range_seq<F: Fn(u64) -> bool>(n: u64, keep: F) -> Vec<u64> {
    (0..n).filter(|&i| keep(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let xs: Vec<u32> = (0..1000).collect();
        assert_eq!(map(&xs, |x| x * 3), map_seq(&xs, |x| x * 3));
        assert_eq!(
            filter_range(5000, |i| i % 7 == 3),
            filter_range_seq(5000, |i| i % 7 == 3)
        );
    }
}
