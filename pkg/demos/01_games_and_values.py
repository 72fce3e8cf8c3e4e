"""
Induced subgraph games: weights, coalition values, and JSON round-trips
=======================================================================

A game on n agents is an undirected weighted graph; the value of a
coalition is the sum of edge weights inside it.  Coalitions are plain
Python ints used as bitmasks (bit i set = agent i is a member; the CLI
reports 1-based labels).
"""

import numpy as np

import coalcut as cc


def show_coalition(game, mask):
    members = cc.mask_members(mask)
    print(f"  v({members}) = {cc.coalition_value(game, mask):+.3f}   mask=0b{mask:0{game.n}b}")


def main():
    # the bundled 4-agent game with a known optimal structure of value 6
    game = cc.sample_game()
    print(f"sample game: n={game.n}")
    print("weight matrix:")
    print(np.array2string(game.weights, precision=1))

    print("\nsome coalition values:")
    for mask in (0b0001, 0b0011, 0b0101, 0b1010, 0b1111):
        show_coalition(game, mask)

    # a coalition structure is scored by summing its parts
    cs = cc.CoalitionStructure.from_masks(game, [0b0101, 0b0010, 0b1000])
    print(f"\nstructure {cs.member_lists()} has value {cs.value}")

    # random games: uniform weights on [-1, 1], or standard normal
    spec = cc.GameSpec(n=6, distribution=cc.Uniform(), seed=11)
    g6 = cc.generate_game(spec)
    print(f"\nrandom 6-agent game, grand coalition value "
          f"{cc.coalition_value(g6, cc.full_mask(6)):+.4f}")

    # serialization keeps full float precision
    text = cc.game_to_json(g6)
    back = cc.game_from_json(text)
    print("JSON round-trip exact:", np.array_equal(g6.weights, back.weights))


if __name__ == "__main__":
    main()
