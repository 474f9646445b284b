#!/usr/bin/env python

"""Print the path of the local oirl installation."""

if __name__=="__main__":  # pragma: no cover
    import oirl
    import os.path
    print(os.path.dirname(oirl.__file__))
