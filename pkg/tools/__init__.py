# cstarnet tools package: sampling, JSON codecs and report files
