from keras.models import Sequential
from keras.layers import GRU, Dense

model = Sequential()
model.add(GRU(96))
model.add(Dense(1, activation='sigmoid'))
model.compile(optimizer='rmsprop', loss='binary_crossentropy')
