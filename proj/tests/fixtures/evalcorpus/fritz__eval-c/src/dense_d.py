from keras.models import Sequential
from keras.layers import Dense

model = Sequential()
model.add(Dense(64))
model.add(Dense(64))
model.add(Dense(1))
model.compile(optimizer='sgd', loss='mean_squared_error')
