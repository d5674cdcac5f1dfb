from keras.models import Sequential
from keras.layers import Dense

net = Sequential()
net.add(Dense(8))
