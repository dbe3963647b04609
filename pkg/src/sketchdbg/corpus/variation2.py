def apply_until(stop_fn, update_fn, initial):
    value = initial
    while not stop_fn(value):
        value = update_fn(value)
    return value

def greater_than_100(x):
    return x > 100

def double_plus_one(x):
    return 2 * x + 1

apply_until(greater_than_100, double_plus_one, 1)
